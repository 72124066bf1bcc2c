//! Permutation similarity: `M ~ N` iff `N = P M P^T` for a permutation
//! matrix `P`, i.e. a simultaneous relabeling of rows and columns.

use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use serde::ser::{Serialize, SerializeSeq, Serializer};
use serde::Serialize as DeriveSerialize;

use crate::error::{Error, Result};
use crate::matrix::{block_compose, make_i, make_j, make_l, make_t, BitMatrix};

/// Largest side [`canonical_form`] accepts by default.
pub const DEFAULT_CANONICAL_LIMIT: usize = 8;

/// A bijection on `{1, ..., b}`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Permutation {
    // 0-based images
    images: Vec<usize>,
}

impl Permutation {
    /// From 1-based images: `images[i - 1] = σ(i)`.
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &v in &images {
            if v == 0 || v > n || seen[v - 1] {
                return Err(Error::InvalidPermutation(format!("{images:?}")));
            }
            seen[v - 1] = true;
        }
        Ok(Self { images: images.into_iter().map(|v| v - 1).collect() })
    }

    pub(crate) fn from_zero_based(images: Vec<usize>) -> Self {
        Self { images }
    }

    pub fn identity(n: usize) -> Self {
        Self { images: (0..n).collect() }
    }

    /// Swaps `i` and `j` (1-based).
    pub fn transposition(n: usize, i: usize, j: usize) -> Result<Self> {
        for v in [i, j] {
            if v == 0 || v > n {
                return Err(Error::IndexOutOfRange { index: v, size: n });
            }
        }
        let mut p = Self::identity(n);
        p.images.swap(i - 1, j - 1);
        Ok(p)
    }

    /// `l -> b + 1 - l`.
    pub fn reversal(n: usize) -> Self {
        Self { images: (0..n).rev().collect() }
    }

    pub fn size(&self) -> usize {
        self.images.len()
    }

    /// `σ(i)`, 1-based.
    pub fn image(&self, i: usize) -> usize {
        self.images[i - 1] + 1
    }

    /// 1-based image list.
    pub fn images(&self) -> Vec<usize> {
        self.images.iter().map(|v| v + 1).collect()
    }

    /// `self ∘ other`: first `other`, then `self`.
    pub fn compose(&self, other: &Permutation) -> Result<Permutation> {
        if self.size() != other.size() {
            return Err(Error::SizeMismatch { left: self.size(), right: other.size() });
        }
        Ok(Self { images: other.images.iter().map(|&v| self.images[v]).collect() })
    }

    pub fn inverse(&self) -> Permutation {
        let mut inv = vec![0; self.images.len()];
        for (i, &v) in self.images.iter().enumerate() {
            inv[v] = i;
        }
        Self { images: inv }
    }

    /// Letterwise image of a word over `{1, ..., b}`.
    pub fn apply_to_word(&self, word: &[usize]) -> Vec<usize> {
        word.iter().map(|&l| self.image(l)).collect()
    }

    /// All permutations of `{1, ..., n}` in lexicographic order of images.
    pub fn all(n: usize) -> Vec<Permutation> {
        let mut out = Vec::new();
        let mut current: Vec<usize> = (0..n).collect();
        loop {
            out.push(Self { images: current.clone() });
            // next lexicographic permutation
            let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
                return out;
            };
            let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
            current.swap(i - 1, j);
            current[i..].reverse();
        }
    }
}

impl fmt::Debug for Permutation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Permutation{:?}", self.images())
    }
}

/// Serializes as the 1-based image list, as decimal strings.
impl Serialize for Permutation {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = serializer.serialize_seq(Some(self.images.len()))?;
        for v in self.images() {
            seq.serialize_element(&v.to_string())?;
        }
        seq.end()
    }
}

/// `N` with `N_lk = M_{σ(l) σ(k)}`. Satisfies
/// `apply(apply(m, σ), τ) = apply(m, σ ∘ τ)`.
pub fn apply_permutation(m: &BitMatrix, sigma: &Permutation) -> Result<BitMatrix> {
    let n = m.size();
    if sigma.size() != n {
        return Err(Error::SizeMismatch { left: n, right: sigma.size() });
    }
    let src = m.rows();
    let rows = (0..n)
        .map(|l| {
            let row = src[sigma.images[l]];
            (0..n).fold(0u64, |acc, k| acc | ((row >> sigma.images[k] & 1) << k))
        })
        .collect();
    BitMatrix::block(n, rows)
}

/// Lexicographically least representative of a similarity class.
#[derive(Debug, Clone, PartialEq, Eq, DeriveSerialize)]
pub struct CanonicalForm {
    pub matrix: BitMatrix,
    /// `apply_permutation(input, witness) == matrix`.
    pub witness: Permutation,
}

struct CanonicalSearch<'a> {
    rows: &'a [u64],
    n: usize,
    perm: Vec<usize>,
    used: u64,
    best: Option<(Vec<u64>, Vec<usize>)>,
}

impl CanonicalSearch<'_> {
    /// Row `l` of the relabeled matrix as a key with column 1 in the most
    /// significant position, so that integer order is row-major lex order.
    fn known_key(&self, l: usize, t: usize) -> u64 {
        let row = self.rows[self.perm[l]];
        (0..t).fold(0u64, |acc, k| acc | ((row >> self.perm[k] & 1) << (self.n - 1 - k)))
    }

    fn pruned(&self, t: usize) -> bool {
        let Some((best, _)) = &self.best else {
            return false;
        };
        for (l, target) in best.iter().enumerate().take(t) {
            let known = self.known_key(l, t);
            let remaining = (self.rows[self.perm[l]] & !self.used).count_ones();
            // cheapest completion: the remaining ones in the last columns
            let bound = known | ((1u64 << remaining) - 1);
            match bound.cmp(target) {
                std::cmp::Ordering::Greater => return true,
                std::cmp::Ordering::Less => return false,
                std::cmp::Ordering::Equal => {
                    let free = (self.n - t) as u32;
                    if remaining != 0 && remaining != free {
                        return false;
                    }
                }
            }
        }
        false
    }

    fn run(&mut self, t: usize) {
        if t == self.n {
            let keys: Vec<u64> = (0..self.n).map(|l| self.known_key(l, self.n)).collect();
            let better = match &self.best {
                None => true,
                Some((best, _)) => keys < *best,
            };
            if better {
                self.best = Some((keys, self.perm.clone()));
            }
            return;
        }
        for v in 0..self.n {
            if self.used >> v & 1 == 1 {
                continue;
            }
            self.perm.push(v);
            self.used |= 1 << v;
            if !self.pruned(t + 1) {
                self.run(t + 1);
            }
            self.used &= !(1 << v);
            self.perm.pop();
        }
    }
}

pub fn canonical_form(m: &BitMatrix) -> Result<CanonicalForm> {
    canonical_form_with_limit(m, DEFAULT_CANONICAL_LIMIT)
}

/// Branch-and-bound over partial vertex orderings: a prefix is cut as soon
/// as the rows it already pins down cannot beat the best complete ordering.
pub fn canonical_form_with_limit(m: &BitMatrix, limit: usize) -> Result<CanonicalForm> {
    let n = m.size();
    if n > limit {
        return Err(Error::CanonicalLimit { size: n, limit });
    }
    let mut search = CanonicalSearch { rows: m.rows(), n, perm: Vec::with_capacity(n), used: 0, best: None };
    search.run(0);
    let (_, perm) = search.best.expect("at least one ordering exists");
    let witness = Permutation::from_zero_based(perm);
    let matrix = apply_permutation(m, &witness)?;
    Ok(CanonicalForm { matrix, witness })
}

pub fn are_equivalent(a: &BitMatrix, b: &BitMatrix) -> Result<bool> {
    Ok(equivalence_witness(a, b)?.is_some())
}

/// A permutation `σ` with `apply_permutation(a, σ) == b`, if `a ~ b`.
pub fn equivalence_witness(a: &BitMatrix, b: &BitMatrix) -> Result<Option<Permutation>> {
    if a.size() != b.size() {
        return Err(Error::SizeMismatch { left: a.size(), right: b.size() });
    }
    let ca = canonical_form(a)?;
    let cb = canonical_form(b)?;
    if ca.matrix != cb.matrix {
        return Ok(None);
    }
    Ok(Some(ca.witness.compose(&cb.witness.inverse())?))
}

/// Exactly one 1 in every row and every column.
pub fn is_permutation_matrix(m: &BitMatrix) -> bool {
    let n = m.size();
    let cols = m.rows().iter().fold(0u64, |acc, r| acc | r);
    n > 0 && m.rows().iter().all(|r| r.count_ones() == 1) && cols.count_ones() as usize == n
}

/// The three maximizers of the bounded supremum: `[[1,0],[1,L_{b-1}]]`,
/// `[[I_2,0],[1,L_{b-2}]]` and `[[J_2,0],[1,L_{b-2}]]`.
pub fn extremal_sup_forms(b: usize) -> Result<[BitMatrix; 3]> {
    if b < 2 {
        return Err(Error::OutOfRange { value: b, expected: "b >= 2" });
    }
    let lower = |k: usize| if k == 0 { Ok(BitMatrix::empty()) } else { make_l(k) };
    Ok([
        block_compose(&make_i(1)?, &lower(b - 1)?)?,
        block_compose(&make_i(2)?, &lower(b - 2)?)?,
        block_compose(&make_j(2)?, &lower(b - 2)?)?,
    ])
}

/// An ordering that makes `m` strictly lower triangular, if the digraph is
/// acyclic: vertices are placed sinks first, smallest index first.
pub fn is_strictly_lower_triangularizable(m: &BitMatrix) -> Option<Permutation> {
    let n = m.size();
    let rows = m.rows();
    let mut placed = 0u64;
    let mut order = Vec::with_capacity(n);
    while order.len() < n {
        let v = (0..n).find(|&v| placed >> v & 1 == 0 && rows[v] & !placed == 0)?;
        placed |= 1 << v;
        order.push(v);
    }
    Some(Permutation::from_zero_based(order))
}

/// Strictly lower triangular: ones only below the diagonal.
pub fn is_strictly_lower_triangular(m: &BitMatrix) -> bool {
    m.rows().iter().enumerate().all(|(i, &r)| r >> i == 0)
}

/// Canonical forms of the extremal targets at one side.
#[derive(Debug)]
pub struct ExtremalTargets {
    pub sup_forms: [BitMatrix; 3],
    pub binomial_form: BitMatrix,
}

static TARGETS: OnceLock<Mutex<HashMap<usize, Arc<ExtremalTargets>>>> = OnceLock::new();

/// Cached canonical forms of `extremal_sup_forms(b)` and `T_b`.
pub fn extremal_targets(b: usize) -> Result<Arc<ExtremalTargets>> {
    let cache = TARGETS.get_or_init(|| Mutex::new(HashMap::new()));
    if let Some(t) = cache.lock().expect("target cache poisoned").get(&b) {
        return Ok(Arc::clone(t));
    }
    let [a, c, d] = extremal_sup_forms(b)?;
    let targets = Arc::new(ExtremalTargets {
        sup_forms: [canonical_form(&a)?.matrix, canonical_form(&c)?.matrix, canonical_form(&d)?.matrix],
        binomial_form: canonical_form(&make_t(b)?)?.matrix,
    });
    cache.lock().expect("target cache poisoned").insert(b, Arc::clone(&targets));
    Ok(targets)
}
