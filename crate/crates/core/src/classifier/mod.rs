//! Growth classification of `‖M^n‖` for matrices satisfying P1.
//!
//! Decisions are structural: P2 separates exponential growth from the
//! rest, and among P2 matrices the sequence is bounded exactly when every
//! vertex reachable from a cycle has out-degree 1. Norm values are only
//! attached as certificates.

pub mod spectral;

use num_bigint::BigUint;
use serde::Serialize;

use crate::digraph;
use crate::equivalence::{canonical_form, extremal_targets};
use crate::error::{Error, Result};
use crate::matrix::{check_member_p1, norm_sequence, BitMatrix};
use crate::symbolic::{self, InfiniteCensus, InfiniteWordDescriptor};

pub use spectral::{
    characteristic_polynomial, dimension, norm_ratio_estimate, norm_root_estimate, spectral_radius,
    spectral_radius_norm_ratio, DimensionResult, SpectralMethod, SpectralRadiusResult,
};

/// Horizon used as the finite stand-in for "for all n".
pub const DEFAULT_HORIZON: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "class", content = "certificate", rename_all = "lowercase")]
pub enum GrowthClass {
    /// `(M^exponent)_{vertex,vertex} = diagonal >= 2`, hence
    /// `‖M^{exponent·n}‖ >= 2^n`.
    Exponential {
        #[serde(serialize_with = "crate::json::int")]
        vertex: usize,
        #[serde(serialize_with = "crate::json::int")]
        exponent: usize,
        #[serde(serialize_with = "crate::json::big")]
        diagonal: BigUint,
    },
    /// `head` lies on a cycle and has two distinct infinite words, which
    /// part ways right after `branch`.
    Polynomial {
        #[serde(serialize_with = "crate::json::int")]
        head: usize,
        #[serde(serialize_with = "crate::json::int")]
        branch: usize,
        words: [InfiniteWordDescriptor; 2],
    },
    Bounded {
        #[serde(serialize_with = "crate::json::big")]
        stabilized_norm: BigUint,
        #[serde(serialize_with = "crate::json::u64_str")]
        census_size: u64,
    },
}

impl GrowthClass {
    pub fn label(&self) -> &'static str {
        match self {
            GrowthClass::Exponential { .. } => "exponential",
            GrowthClass::Polynomial { .. } => "polynomial",
            GrowthClass::Bounded { .. } => "bounded",
        }
    }

    pub fn is_bounded(&self) -> bool {
        matches!(self, GrowthClass::Bounded { .. })
    }
}

/// Smallest `(k, i)` with `(M^k)_ii >= 2`. Two distinct cycles through a
/// vertex have lengths `p, q <= b`, so `k <= b^2`.
fn exponential_certificate(m: &BitMatrix) -> GrowthClass {
    let b = m.size();
    let mut acc = m.to_nat();
    for k in 1..=b * b {
        if k > 1 {
            acc = acc.mul_bits(m);
        }
        for i in 0..b {
            if *acc.at(i, i) >= BigUint::from(2u32) {
                return GrowthClass::Exponential {
                    vertex: i + 1,
                    exponent: k,
                    diagonal: acc.at(i, i).clone(),
                };
            }
        }
    }
    unreachable!("a complex component yields a diagonal entry >= 2 by k = b^2")
}

/// Walks the cycle of `head` to the first vertex with a second out-edge,
/// leaves the cycle there and follows smallest successors until a vertex
/// repeats.
fn polynomial_certificate(m: &BitMatrix, head: usize) -> Result<GrowthClass> {
    let periodic = symbolic::periodic_word(m, head)?;
    let cycle = periodic.period().to_vec();
    let pos = cycle
        .iter()
        .position(|&v| m.out_degree(v - 1) >= 2)
        .expect("an unbounded P1/P2 matrix branches on some cycle");
    let branch = cycle[pos];
    let on_cycle = cycle[(pos + 1) % cycle.len()];
    let row = m.rows()[branch - 1] & !(1u64 << (on_cycle - 1));
    let mut walk: Vec<usize> = cycle[..=pos].to_vec();
    let mut v = row.trailing_zeros() as usize + 1;
    loop {
        if let Some(r) = walk.iter().position(|&x| x == v) {
            let other = InfiniteWordDescriptor::new(walk[..r].to_vec(), walk[r..].to_vec())?;
            return Ok(GrowthClass::Polynomial { head, branch, words: [periodic, other] });
        }
        walk.push(v);
        let next = m.rows()[v - 1];
        if next == 0 {
            // only reachable without P1
            return Err(Error::P1Violation { witness: v });
        }
        v = next.trailing_zeros() as usize + 1;
    }
}

pub fn classify(m: &BitMatrix) -> Result<GrowthClass> {
    check_member_p1(m)?;
    if !digraph::satisfies_p2(m) {
        return Ok(exponential_certificate(m));
    }
    if let Some((head, _)) = symbolic::reachable_branching(m) {
        return polynomial_certificate(m, head);
    }
    let stabilized_norm = stabilized_norm(m)?;
    let census_size = match symbolic::infinite_word_census(m)? {
        InfiniteCensus::Finite(words) => words.len() as u64,
        _ => unreachable!("bounded structure has a finite census"),
    };
    Ok(GrowthClass::Bounded { stabilized_norm, census_size })
}

fn stabilized_norm(m: &BitMatrix) -> Result<BigUint> {
    let limit = 4 * m.size() + 8;
    let seq = norm_sequence(m, limit);
    seq.windows(2).find(|w| w[0] == w[1]).map(|w| w[1].clone()).ok_or(Error::NoStabilization(limit))
}

/// `sup_n ‖M^n‖` for a bounded-class matrix: norms are computed until two
/// consecutive ones coincide, after which the sequence is constant.
pub fn sup_norm(m: &BitMatrix) -> Result<BigUint> {
    check_member_p1(m)?;
    if !digraph::satisfies_p2(m) || symbolic::reachable_branching(m).is_some() {
        return Err(Error::Unbounded);
    }
    stabilized_norm(m)
}

/// Similar to one of the three maximizers of the bounded supremum.
pub fn is_sup_extremal(m: &BitMatrix) -> Result<bool> {
    check_member_p1(m)?;
    let targets = extremal_targets(m.size())?;
    let c = canonical_form(m)?.matrix;
    Ok(targets.sup_forms.contains(&c))
}

/// Similar to `T_b`.
pub fn is_binomial_extremal(m: &BitMatrix) -> Result<bool> {
    check_member_p1(m)?;
    let targets = extremal_targets(m.size())?;
    Ok(canonical_form(m)?.matrix == targets.binomial_form)
}

/// Everything the `classify` front end reports for one matrix.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Analysis {
    pub matrix: BitMatrix,
    #[serde(flatten)]
    pub class: GrowthClass,
    #[serde(serialize_with = "opt_big")]
    pub sup_norm: Option<BigUint>,
    pub dimension: f64,
    pub spectral_radius: f64,
}

fn opt_big<S: serde::Serializer>(v: &Option<BigUint>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(v) => s.serialize_str(&v.to_str_radix(10)),
        None => s.serialize_none(),
    }
}

pub fn analyze(m: &BitMatrix) -> Result<Analysis> {
    let class = classify(m)?;
    let sup = match &class {
        GrowthClass::Bounded { stabilized_norm, .. } => Some(stabilized_norm.clone()),
        _ => None,
    };
    let dim = dimension(m);
    Ok(Analysis {
        matrix: m.clone(),
        class,
        sup_norm: sup,
        dimension: dim.value,
        spectral_radius: dim.spectral_radius.value,
    })
}
