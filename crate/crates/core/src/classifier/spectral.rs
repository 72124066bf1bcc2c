//! Spectral radius from the exact characteristic polynomial.
//!
//! The polynomial comes from the Faddeev-LeVerrier recurrence over the
//! integers (every division in it is exact). Integer roots are found by
//! evaluation and divided out; the rest has no rational roots, so Sturm
//! sequences evaluated at dyadic points never hit a root and bisection on
//! root counts isolates the largest one.

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::Serialize;

use crate::matrix::{norm_sequence, BitMatrix};

/// Width below which bisection stops.
pub const BISECTION_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SpectralMethod {
    ExactCharPoly,
    NormRatio,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectralRadiusResult {
    pub value: f64,
    pub method: SpectralMethod,
    pub error_bound: f64,
    /// True when the value is an exact integer root.
    pub exact: bool,
}

/// Coefficients of `det(xI - M)`, constant term first.
pub fn characteristic_polynomial(m: &BitMatrix) -> Vec<BigInt> {
    let n = m.size();
    let a: Vec<BigInt> = (0..n * n).map(|idx| BigInt::from(m.rows()[idx / n] >> (idx % n) & 1)).collect();
    let mul = |x: &[BigInt], y: &[BigInt]| -> Vec<BigInt> {
        let mut out = vec![BigInt::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                if x[i * n + k].is_zero() {
                    continue;
                }
                for j in 0..n {
                    if !y[k * n + j].is_zero() {
                        out[i * n + j] += &x[i * n + k] * &y[k * n + j];
                    }
                }
            }
        }
        out
    };
    let mut coeffs = vec![BigInt::zero(); n + 1];
    coeffs[n] = BigInt::one();
    let mut aux = vec![BigInt::zero(); n * n];
    for k in 1..=n {
        let mut next = mul(&a, &aux);
        for i in 0..n {
            next[i * n + i] += &coeffs[n - k + 1];
        }
        let prod = mul(&a, &next);
        let trace: BigInt = (0..n).map(|i| &prod[i * n + i]).sum();
        let (q, r) = trace.div_rem(&BigInt::from(k));
        debug_assert!(r.is_zero(), "Faddeev-LeVerrier division is exact");
        coeffs[n - k] = -q;
        aux = next;
    }
    coeffs
}

fn eval_int(p: &[BigInt], x: &BigInt) -> BigInt {
    p.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
}

/// Synthetic division by `(x - r)`; the remainder must be zero.
fn deflate(p: &[BigInt], r: &BigInt) -> Vec<BigInt> {
    let d = p.len() - 1;
    let mut q = vec![BigInt::zero(); d];
    let mut carry = BigInt::zero();
    for i in (1..=d).rev() {
        carry = &p[i] + carry * r;
        q[i - 1] = carry.clone();
    }
    debug_assert!((&p[0] + carry * r).is_zero());
    q
}

fn degree(p: &[BigInt]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

fn derivative(p: &[BigInt]) -> Vec<BigInt> {
    p.iter().enumerate().skip(1).map(|(i, c)| c * BigInt::from(i)).collect()
}

/// Remainder of `a` by `b`, scaled by a positive constant so that it stays
/// integral (pseudo-division with a squared leading coefficient).
fn signed_remainder(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = degree(b).expect("divisor is nonzero");
    let lead = b[db].clone();
    let mut r: Vec<BigInt> = a.to_vec();
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let coef = r[dr].clone();
        let shift = dr - db;
        // r <- lead^2 * r - lead * coef * x^shift * b keeps the scale positive
        let scale = &lead * &lead;
        for c in r.iter_mut() {
            *c *= &scale;
        }
        let factor = &lead * &coef;
        for (i, bc) in b.iter().enumerate().take(db + 1) {
            r[i + shift] -= &factor * bc;
        }
    }
    let content = r.iter().fold(BigInt::zero(), |g, c| g.gcd(c));
    if !content.is_zero() && !content.is_one() {
        for c in r.iter_mut() {
            *c /= &content;
        }
    }
    r.truncate(degree(&r).map_or(0, |d| d + 1));
    r
}

fn sturm_sequence(p: &[BigInt]) -> Vec<Vec<BigInt>> {
    let mut seq = vec![p.to_vec(), derivative(p)];
    loop {
        let len = seq.len();
        if degree(&seq[len - 1]).is_none() {
            seq.pop();
            break;
        }
        if degree(&seq[len - 1]) == Some(0) {
            break;
        }
        let r = signed_remainder(&seq[len - 2], &seq[len - 1]);
        if degree(&r).is_none() {
            break;
        }
        seq.push(r.into_iter().map(|c| -c).collect());
    }
    seq
}

/// Sign of `p(num / 2^shift)`.
fn sign_at(p: &[BigInt], num: &BigInt, shift: u64) -> Sign {
    let Some(d) = degree(p) else {
        return Sign::NoSign;
    };
    // sum c_i num^i 2^{shift (d - i)} has the sign of p(x) * 2^{shift d}
    let mut acc = BigInt::zero();
    let mut pow = BigInt::one();
    for (i, c) in p.iter().enumerate().take(d + 1) {
        if !c.is_zero() {
            acc += (c * &pow) << (shift * (d - i) as u64);
        }
        pow *= num;
    }
    acc.sign()
}

fn sign_changes(seq: &[Vec<BigInt>], num: &BigInt, shift: u64) -> usize {
    let mut last = Sign::NoSign;
    let mut changes = 0;
    for p in seq {
        let s = sign_at(p, num, shift);
        if s == Sign::NoSign {
            continue;
        }
        if last != Sign::NoSign && s != last {
            changes += 1;
        }
        last = s;
    }
    changes
}

fn to_f64(num: &BigInt, shift: u64) -> f64 {
    num.to_f64().unwrap_or(f64::INFINITY) / 2f64.powi(shift as i32)
}

/// Exact characteristic polynomial, then the largest real root in `[0, b]`
/// to within [`BISECTION_TOLERANCE`].
pub fn spectral_radius(m: &BitMatrix) -> SpectralRadiusResult {
    let b = m.size() as i64;
    let mut p = characteristic_polynomial(m);

    let mut largest_integer: Option<i64> = None;
    for r in (0..=b).rev() {
        let rb = BigInt::from(r);
        let mut hit = false;
        while degree(&p).unwrap_or(0) > 0 && eval_int(&p, &rb).is_zero() {
            p = deflate(&p, &rb);
            hit = true;
        }
        if hit && largest_integer.is_none() {
            largest_integer = Some(r);
        }
    }

    let mut irrational: Option<(f64, f64)> = None;
    if degree(&p).unwrap_or(0) > 0 {
        let seq = sturm_sequence(&p);
        let shift: u64 = ((b as f64) / BISECTION_TOLERANCE).log2().ceil() as u64 + 1;
        // interval (lo, hi] in units of 2^-shift
        let mut lo = BigInt::zero();
        let mut hi = BigInt::from(b) << shift;
        let v_hi = sign_changes(&seq, &hi, shift);
        if sign_changes(&seq, &lo, shift) > v_hi {
            while &hi - &lo > BigInt::one() {
                let mid: BigInt = (&lo + &hi) >> 1u32;
                if sign_changes(&seq, &mid, shift) > v_hi {
                    lo = mid;
                } else {
                    hi = mid;
                }
            }
            let value = (to_f64(&lo, shift) + to_f64(&hi, shift)) / 2.0;
            let err = (to_f64(&hi, shift) - to_f64(&lo, shift)) / 2.0;
            irrational = Some((value, err));
        }
    }

    match (largest_integer, irrational) {
        (Some(r), Some((v, e))) if v - e > r as f64 => SpectralRadiusResult {
            value: v,
            method: SpectralMethod::ExactCharPoly,
            error_bound: e,
            exact: false,
        },
        (Some(r), _) => SpectralRadiusResult {
            value: r as f64,
            method: SpectralMethod::ExactCharPoly,
            error_bound: 0.0,
            exact: true,
        },
        (None, Some((v, e))) => SpectralRadiusResult {
            value: v,
            method: SpectralMethod::ExactCharPoly,
            error_bound: e,
            exact: false,
        },
        // a nonnegative matrix always has its spectral radius as an eigenvalue
        (None, None) => SpectralRadiusResult {
            value: 0.0,
            method: SpectralMethod::ExactCharPoly,
            error_bound: 0.0,
            exact: true,
        },
    }
}

fn big_ln(v: &BigUint) -> f64 {
    let bits = v.bits();
    if bits <= 1000 {
        return v.to_f64().unwrap_or(f64::INFINITY).ln();
    }
    let drop = bits - 60;
    (v >> drop).to_f64().unwrap_or(f64::INFINITY).ln() + drop as f64 * std::f64::consts::LN_2
}

/// `(‖M^{2n}‖ / ‖M^n‖)^(1/n)`, or `None` when `M^n = 0`.
pub fn norm_ratio_estimate(m: &BitMatrix, n: usize) -> Option<f64> {
    let seq = norm_sequence(m, 2 * n);
    let a = &seq[n - 1];
    let b = &seq[2 * n - 1];
    if a.is_zero() {
        return None;
    }
    Some(((big_ln(b) - big_ln(a)) / n as f64).exp())
}

/// `‖M^n‖^(1/n)`.
pub fn norm_root_estimate(m: &BitMatrix, n: usize) -> f64 {
    let v = norm_sequence(m, n).pop().unwrap_or_default();
    if v.is_zero() {
        0.0
    } else {
        (big_ln(&v) / n as f64).exp()
    }
}

/// Norm-ratio estimate with the spread against the half horizon as its
/// error bound.
pub fn spectral_radius_norm_ratio(m: &BitMatrix, n: usize) -> SpectralRadiusResult {
    let full = norm_ratio_estimate(m, n).unwrap_or(0.0);
    let half = norm_ratio_estimate(m, (n / 2).max(1)).unwrap_or(0.0);
    SpectralRadiusResult {
        value: full,
        method: SpectralMethod::NormRatio,
        error_bound: (full - half).abs(),
        exact: false,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DimensionResult {
    pub value: f64,
    pub error_bound: f64,
    pub spectral_radius: SpectralRadiusResult,
    /// No admissible infinite words at all (acyclic digraph).
    pub empty_word_space: bool,
}

/// `log ρ / log b`, clamped to 0 when `ρ <= 1`.
pub fn dimension(m: &BitMatrix) -> DimensionResult {
    let rho = spectral_radius(m);
    let b = m.size() as f64;
    let empty = rho.exact && rho.value == 0.0;
    let (value, error_bound) = if rho.value <= 1.0 && rho.exact {
        (0.0, 0.0)
    } else if rho.value - rho.error_bound <= 1.0 {
        (0.0_f64.max(rho.value.ln() / b.ln()), rho.error_bound / b.ln())
    } else {
        (rho.value.ln() / b.ln(), rho.error_bound / (rho.value - rho.error_bound) / b.ln())
    };
    DimensionResult { value, error_bound, spectral_radius: rho, empty_word_space: empty }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{make_i, make_j, make_l, make_t};

    fn bm(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    fn ints(v: &[i64]) -> Vec<BigInt> {
        v.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn char_poly_examples() {
        assert_eq!(characteristic_polynomial(&bm("11;10")), ints(&[-1, -1, 1]));
        assert_eq!(characteristic_polynomial(&make_t(3).unwrap()), ints(&[-1, 3, -3, 1]));
        assert_eq!(characteristic_polynomial(&make_j(3).unwrap()), ints(&[-1, 0, 0, 1]));
        assert_eq!(characteristic_polynomial(&make_l(3).unwrap()), ints(&[0, 0, 0, 1]));
        assert_eq!(characteristic_polynomial(&bm("11;11")), ints(&[0, -2, 1]));
    }

    #[test]
    fn radius_examples() {
        for b in 2..=6 {
            let r = spectral_radius(&make_t(b).unwrap());
            assert_eq!((r.value, r.exact), (1.0, true));
        }
        let r = spectral_radius(&bm("11;11"));
        assert_eq!((r.value, r.exact), (2.0, true));
        let r = spectral_radius(&bm("11;10"));
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((r.value - phi).abs() < 1e-12, "{}", r.value);
        assert!(r.error_bound <= 1e-12);
        assert_eq!(spectral_radius(&make_l(4).unwrap()).value, 0.0);
        assert_eq!(spectral_radius(&make_i(3).unwrap()).value, 1.0);
    }

    #[test]
    fn radius_of_repeated_irrational_root() {
        // block diagonal golden-mean pair: (x^2 - x - 1)^2
        let m = bm("1100;1000;0011;0010");
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        assert!((spectral_radius(&m).value - phi).abs() < 1e-12);
    }

    #[test]
    fn dimension_examples() {
        assert_eq!(dimension(&bm("111;111;111")).value, 1.0);
        let d = dimension(&bm("11;10"));
        assert!((d.value - 0.694242).abs() < 1e-6);
        assert_eq!(dimension(&make_t(3).unwrap()).value, 0.0);
        assert!(dimension(&make_l(3).unwrap()).empty_word_space);
        assert!(!dimension(&make_i(3).unwrap()).empty_word_space);
    }

    #[test]
    fn ratio_estimate_tracks_radius() {
        let est = norm_ratio_estimate(&bm("11;10"), 32).unwrap();
        assert!((est - 1.618034).abs() < 1e-3);
        assert_eq!(norm_ratio_estimate(&make_l(3).unwrap(), 4), None);
    }
}
