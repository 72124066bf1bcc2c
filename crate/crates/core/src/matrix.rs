//! Exact {0,1}-matrix and nonnegative integer matrix arithmetic.
//!
//! All indices at the public boundary are 1-based: `get(i, j)` reads the
//! entry in row `i`, column `j` with `1 <= i, j <= b`. Internally a
//! [`BitMatrix`] stores one `u64` mask per row with bit `j - 1` holding
//! entry `(i, j)`, which caps the side at 64.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::ser::{Serialize, SerializeSeq, Serializer};

use crate::error::{Error, Result};

/// Largest side a [`BitMatrix`] can hold.
pub const MAX_SIDE: usize = 64;

/// Exponent above which [`power`] switches to repeated squaring.
const SQUARING_THRESHOLD: usize = 8;

/// A square {0,1}-matrix.
///
/// Values built through [`BitMatrix::new`], [`BitMatrix::from_index`] or
/// parsing are members of the family of nonzero `b x b` matrices with
/// `b >= 2`. The block constructors ([`make_l`], [`make_i`],
/// [`BitMatrix::block`], ...) may produce `0 x 0`, `1 x 1` or zero blocks;
/// use [`BitMatrix::is_member`] to tell them apart.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitMatrix {
    size: usize,
    rows: Vec<u64>,
}

fn full_mask(size: usize) -> u64 {
    if size >= 64 {
        u64::MAX
    } else {
        (1u64 << size) - 1
    }
}

impl BitMatrix {
    /// Builds a member matrix from row masks (bit `j - 1` of `rows[i - 1]`
    /// is entry `(i, j)`).
    pub fn new(size: usize, rows: Vec<u64>) -> Result<Self> {
        if !(2..=MAX_SIDE).contains(&size) {
            return Err(Error::SizeOutOfRange(size));
        }
        let m = Self::block(size, rows)?;
        if m.is_zero() {
            return Err(Error::ZeroMatrix);
        }
        Ok(m)
    }

    /// Builds a block of any side `0..=64`, without the membership checks.
    pub fn block(size: usize, rows: Vec<u64>) -> Result<Self> {
        if size > MAX_SIDE {
            return Err(Error::SizeOutOfRange(size));
        }
        if rows.len() != size {
            return Err(Error::Parse(format!("expected {size} rows, found {}", rows.len())));
        }
        if let Some(bad) = rows.iter().position(|r| r & !full_mask(size) != 0) {
            return Err(Error::Parse(format!("row {} has bits beyond column {size}", bad + 1)));
        }
        Ok(Self { size, rows })
    }

    /// The `0 x 0` block.
    pub fn empty() -> Self {
        Self { size: 0, rows: Vec::new() }
    }

    /// Builds a block from a predicate on 1-based indices.
    pub fn from_fn(size: usize, mut entry: impl FnMut(usize, usize) -> bool) -> Result<Self> {
        let rows = (1..=size)
            .map(|i| (1..=size).filter(|&j| entry(i, j)).fold(0u64, |acc, j| acc | (1u64 << (j - 1))))
            .collect();
        Self::block(size, rows)
    }

    /// The matrix whose row-major bit string is the binary expansion of
    /// `index`: bit `k` is entry `(k / b + 1, k % b + 1)`.
    pub fn from_index(size: usize, index: u64) -> Result<Self> {
        if !(2..=8).contains(&size) {
            return Err(Error::SizeOutOfRange(size));
        }
        let bits = size * size;
        if bits < 64 && index >> bits != 0 {
            return Err(Error::OutOfRange { value: index as usize, expected: "index < 2^(b*b)" });
        }
        let row_mask = full_mask(size);
        let rows = (0..size).map(|i| (index >> (i * size)) & row_mask).collect();
        Self::new(size, rows)
    }

    /// Inverse of [`BitMatrix::from_index`].
    pub fn index(&self) -> u64 {
        self.rows.iter().enumerate().fold(0u64, |acc, (i, r)| acc | (r << (i * self.size)))
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Row masks, 0-based: bit `j` of `rows()[i]` is entry `(i + 1, j + 1)`.
    pub fn rows(&self) -> &[u64] {
        &self.rows
    }

    /// Entry `(i, j)`, 1-based. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> bool {
        assert!(
            (1..=self.size).contains(&i) && (1..=self.size).contains(&j),
            "index ({i}, {j}) out of range for side {}",
            self.size
        );
        self.bit(i - 1, j - 1)
    }

    #[inline]
    pub(crate) fn bit(&self, i: usize, j: usize) -> bool {
        self.rows[i] >> j & 1 == 1
    }

    pub fn is_zero(&self) -> bool {
        self.rows.iter().all(|&r| r == 0)
    }

    /// Member of the family: side at least 2 and at least one entry 1.
    pub fn is_member(&self) -> bool {
        self.size >= 2 && !self.is_zero()
    }

    /// Number of ones.
    pub fn ones(&self) -> u32 {
        self.rows.iter().map(|r| r.count_ones()).sum()
    }

    /// Number of ones in row `i` (0-based).
    pub(crate) fn out_degree(&self, i: usize) -> u32 {
        self.rows[i].count_ones()
    }

    pub fn to_nat(&self) -> NatMatrix {
        NatMatrix::from(self)
    }

    /// Rows as '0'/'1' strings.
    pub fn row_strings(&self) -> Vec<String> {
        self.rows
            .iter()
            .map(|&r| (0..self.size).map(|j| if r >> j & 1 == 1 { '1' } else { '0' }).collect())
            .collect()
    }

    /// Command-line text form, rows joined by ';'.
    pub fn to_text(&self) -> String {
        self.row_strings().join(";")
    }

    /// File text form, one row per line with a trailing newline.
    pub fn to_lines(&self) -> String {
        let mut out = String::new();
        for row in self.row_strings() {
            out.push_str(&row);
            out.push('\n');
        }
        out
    }

    /// Parses the text form. Rows are separated by ';' or by newlines;
    /// blank lines and '\r' line endings are tolerated, whitespace inside a
    /// row is not.
    pub fn parse(text: &str) -> Result<Self> {
        let rows: Vec<&str> = text
            .split([';', '\n'])
            .map(|r| r.strip_suffix('\r').unwrap_or(r))
            .filter(|r| !r.is_empty())
            .collect();
        let size = rows.len();
        if size == 0 {
            return Err(Error::Parse("empty matrix".into()));
        }
        if !(2..=MAX_SIDE).contains(&size) {
            return Err(Error::SizeOutOfRange(size));
        }
        let mut masks = Vec::with_capacity(size);
        for (i, row) in rows.iter().enumerate() {
            if row.chars().count() != size {
                return Err(Error::Parse(format!(
                    "row {} has {} entries, expected {size} (matrix must be square)",
                    i + 1,
                    row.chars().count()
                )));
            }
            let mut mask = 0u64;
            for (j, c) in row.chars().enumerate() {
                match c {
                    '0' => {}
                    '1' => mask |= 1u64 << j,
                    other => {
                        return Err(Error::Parse(format!("invalid character {other:?} in row {}", i + 1)))
                    }
                }
            }
            masks.push(mask);
        }
        Self::new(size, masks)
    }
}

impl FromStr for BitMatrix {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Self::parse(s)
    }
}

impl fmt::Display for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_text())
    }
}

impl fmt::Debug for BitMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitMatrix({})", self.to_text())
    }
}

impl Serialize for BitMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_text())
    }
}

/// A square matrix of arbitrary-precision nonnegative integers.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct NatMatrix {
    size: usize,
    entries: Vec<BigUint>,
}

impl NatMatrix {
    pub fn zeros(size: usize) -> Self {
        Self { size, entries: vec![BigUint::zero(); size * size] }
    }

    pub fn identity(size: usize) -> Self {
        let mut m = Self::zeros(size);
        for i in 0..size {
            m.entries[i * size + i] = BigUint::one();
        }
        m
    }

    /// Builds from a function of 1-based indices.
    pub fn from_fn(size: usize, mut entry: impl FnMut(usize, usize) -> BigUint) -> Self {
        let mut entries = Vec::with_capacity(size * size);
        for i in 1..=size {
            for j in 1..=size {
                entries.push(entry(i, j));
            }
        }
        Self { size, entries }
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Entry `(i, j)`, 1-based. Panics when out of range.
    pub fn get(&self, i: usize, j: usize) -> &BigUint {
        assert!(
            (1..=self.size).contains(&i) && (1..=self.size).contains(&j),
            "index ({i}, {j}) out of range for side {}",
            self.size
        );
        &self.entries[(i - 1) * self.size + (j - 1)]
    }

    #[inline]
    pub(crate) fn at(&self, i: usize, j: usize) -> &BigUint {
        &self.entries[i * self.size + j]
    }

    /// Sum of all entries.
    pub fn norm(&self) -> BigUint {
        self.entries.iter().sum()
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(Zero::is_zero)
    }

    /// Exact product `self * rhs`.
    pub fn multiply(&self, rhs: &NatMatrix) -> Result<NatMatrix> {
        if self.size != rhs.size {
            return Err(Error::SizeMismatch { left: self.size, right: rhs.size });
        }
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.at(k, j);
                    if !b.is_zero() {
                        out.entries[i * n + j] += a * b;
                    }
                }
            }
        }
        Ok(out)
    }

    /// Product with a {0,1}-matrix on the right; additions only.
    pub(crate) fn mul_bits(&self, rhs: &BitMatrix) -> NatMatrix {
        let n = self.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.at(i, k);
                if a.is_zero() {
                    continue;
                }
                let mut row = rhs.rows[k];
                while row != 0 {
                    let j = row.trailing_zeros() as usize;
                    out.entries[i * n + j] += a;
                    row &= row - 1;
                }
            }
        }
        out
    }

    /// Rows of decimal strings.
    pub fn to_string_rows(&self) -> Vec<Vec<String>> {
        self.entries
            .chunks(self.size.max(1))
            .take(self.size)
            .map(|row| row.iter().map(|v| v.to_str_radix(10)).collect())
            .collect()
    }
}

impl From<&BitMatrix> for NatMatrix {
    fn from(m: &BitMatrix) -> Self {
        let n = m.size;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                if m.bit(i, j) {
                    out.entries[i * n + j] = BigUint::one();
                }
            }
        }
        out
    }
}

impl fmt::Debug for NatMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "NatMatrix{:?}", self.to_string_rows())
    }
}

/// Serializes as an array of arrays of decimal strings.
impl Serialize for NatMatrix {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let rows = self.to_string_rows();
        let mut seq = serializer.serialize_seq(Some(rows.len()))?;
        for row in &rows {
            seq.serialize_element(row)?;
        }
        seq.end()
    }
}

/// Sum of all entries of `m`.
pub fn norm(m: &NatMatrix) -> BigUint {
    m.norm()
}

pub fn multiply(a: &NatMatrix, b: &NatMatrix) -> Result<NatMatrix> {
    a.multiply(b)
}

/// Exact `m^n` for `n >= 1`: iterated products up to `n = 8`, repeated
/// squaring above.
pub fn power(m: &BitMatrix, n: usize) -> Result<NatMatrix> {
    if n <= SQUARING_THRESHOLD {
        power_iterated(m, n)
    } else {
        power_by_squaring(m, n)
    }
}

/// `m^n` as `n - 1` successive right multiplications by `m`.
pub fn power_iterated(m: &BitMatrix, n: usize) -> Result<NatMatrix> {
    if n == 0 {
        return Err(Error::ZeroExponent);
    }
    let mut acc = m.to_nat();
    for _ in 1..n {
        acc = acc.mul_bits(m);
    }
    Ok(acc)
}

/// `m^n` by binary exponentiation.
pub fn power_by_squaring(m: &BitMatrix, n: usize) -> Result<NatMatrix> {
    if n == 0 {
        return Err(Error::ZeroExponent);
    }
    let mut base = m.to_nat();
    let mut acc: Option<NatMatrix> = None;
    let mut e = n;
    loop {
        if e & 1 == 1 {
            acc = Some(match acc {
                None => base.clone(),
                Some(a) => a.multiply(&base)?,
            });
        }
        e >>= 1;
        if e == 0 {
            break;
        }
        base = base.multiply(&base)?;
    }
    Ok(acc.expect("n >= 1 sets at least one bit"))
}

/// `[‖m^1‖, ..., ‖m^horizon‖]`.
///
/// Computed through the row-sum vector `m^n · 1`, so each step costs `b^2`
/// additions instead of a full matrix product.
pub fn norm_sequence(m: &BitMatrix, horizon: usize) -> Vec<BigUint> {
    let n = m.size;
    let mut v: Vec<BigUint> = vec![BigUint::one(); n];
    let mut out = Vec::with_capacity(horizon);
    for _ in 0..horizon {
        let next: Vec<BigUint> = (0..n)
            .map(|i| {
                let mut row = m.rows[i];
                let mut s = BigUint::zero();
                while row != 0 {
                    let j = row.trailing_zeros() as usize;
                    s += &v[j];
                    row &= row - 1;
                }
                s
            })
            .collect();
        out.push(next.iter().sum());
        v = next;
    }
    out
}

/// Strictly lower triangular pattern: 1 iff `i > j`. `make_l(1)` is the
/// `1 x 1` zero block.
pub fn make_l(k: usize) -> Result<BitMatrix> {
    check_block_side(k, 1)?;
    BitMatrix::from_fn(k, |i, j| i > j)
}

/// Lower triangle with diagonal: 1 iff `i >= j`.
pub fn make_t(k: usize) -> Result<BitMatrix> {
    check_block_side(k, 1)?;
    BitMatrix::from_fn(k, |i, j| i >= j)
}

/// The `k x k` identity.
pub fn make_i(k: usize) -> Result<BitMatrix> {
    check_block_side(k, 1)?;
    BitMatrix::from_fn(k, |i, j| i == j)
}

/// The cyclic permutation matrix with ones at `(1,2), (2,3), ..., (k-1,k), (k,1)`.
pub fn make_j(k: usize) -> Result<BitMatrix> {
    check_block_side(k, 2)?;
    BitMatrix::from_fn(k, |i, j| j == i % k + 1)
}

fn check_block_side(k: usize, min: usize) -> Result<()> {
    if k < min || k > MAX_SIDE {
        return Err(Error::OutOfRange { value: k, expected: if min == 1 { "1..=64" } else { "2..=64" } });
    }
    Ok(())
}

/// Assembles `[[u, 0], [1, lower]]`: `u` in the top-left corner, zeros to
/// its right, all ones below it and `lower` in the bottom-right corner.
pub fn block_compose(u: &BitMatrix, lower: &BitMatrix) -> Result<BitMatrix> {
    let s = u.size;
    let k = lower.size;
    if s == 0 {
        return Err(Error::OutOfRange { value: 0, expected: "top block side >= 1" });
    }
    let total = s + k;
    if total > MAX_SIDE {
        return Err(Error::SizeOutOfRange(total));
    }
    let ones = full_mask(s);
    let rows = u.rows.iter().copied().chain(lower.rows.iter().map(|&r| ones | (r << s))).collect();
    BitMatrix::block(total, rows)
}

/// First index (1-based) with a nonzero column and a zero row, if any.
pub fn p1_witness(m: &BitMatrix) -> Option<usize> {
    let nonzero_columns = m.rows.iter().fold(0u64, |acc, r| acc | r);
    (0..m.size).find(|&i| nonzero_columns >> i & 1 == 1 && m.rows[i] == 0).map(|i| i + 1)
}

/// Every index whose column is nonzero has a nonzero row.
pub fn satisfies_p1(m: &BitMatrix) -> bool {
    p1_witness(m).is_none()
}

/// `Ok` when `m` satisfies P1, otherwise the violation with its witness.
pub fn check_p1(m: &BitMatrix) -> Result<()> {
    match p1_witness(m) {
        None => Ok(()),
        Some(witness) => Err(Error::P1Violation { witness }),
    }
}

/// Membership in the family plus P1.
pub(crate) fn check_member_p1(m: &BitMatrix) -> Result<()> {
    if m.size < 2 {
        return Err(Error::SizeOutOfRange(m.size));
    }
    if m.is_zero() {
        return Err(Error::ZeroMatrix);
    }
    check_p1(m)
}

/// Number of `m`-element subsets of a `k`-element set; 0 when `m > k`.
pub fn binomial(k: u64, m: u64) -> BigUint {
    if m > k {
        return BigUint::zero();
    }
    let m = m.min(k - m);
    let mut acc = BigUint::one();
    for t in 0..m {
        acc *= k - t;
        acc /= t + 1;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;

    fn bm(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    fn nat(rows: &[&[u64]]) -> NatMatrix {
        NatMatrix::from_fn(rows.len(), |i, j| BigUint::from(rows[i - 1][j - 1]))
    }

    #[test]
    fn norms_of_small_patterns() {
        assert_eq!(make_i(2).unwrap().to_nat().norm(), BigUint::from(2u32));
        assert_eq!(make_t(3).unwrap().to_nat().norm(), BigUint::from(6u32));
        let t2sq = power(&make_t(2).unwrap(), 2).unwrap();
        assert_eq!(t2sq, nat(&[&[1, 0], &[2, 1]]));
        assert_eq!(t2sq.norm(), BigUint::from(4u32));
        assert_eq!(t2sq.norm(), binomial(4, 3));
    }

    #[test]
    fn multiply_examples() {
        let i3 = make_i(3).unwrap().to_nat();
        let t3 = make_t(3).unwrap().to_nat();
        assert_eq!(i3.multiply(&t3).unwrap(), t3);

        let l3 = make_l(3).unwrap().to_nat();
        let sq = l3.multiply(&l3).unwrap();
        assert_eq!(sq, nat(&[&[0, 0, 0], &[0, 0, 0], &[1, 0, 0]]));

        let j2 = make_j(2).unwrap().to_nat();
        assert_eq!(j2.multiply(&j2).unwrap(), NatMatrix::identity(2));

        assert_eq!(i3.multiply(&NatMatrix::identity(2)), Err(Error::SizeMismatch { left: 3, right: 2 }));
    }

    #[test]
    fn power_examples() {
        assert!(power(&make_l(3).unwrap(), 3).unwrap().is_zero());
        assert_eq!(power(&make_j(3).unwrap(), 3).unwrap(), NatMatrix::identity(3));
        let full = power(&bm("11;11"), 3).unwrap();
        assert_eq!(full, nat(&[&[4, 4], &[4, 4]]));
        assert_eq!(full.norm(), BigUint::from(16u32));
        assert_eq!(power(&bm("11;11"), 0), Err(Error::ZeroExponent));
        assert_eq!(power(&bm("10;01"), 1).unwrap(), NatMatrix::identity(2));
    }

    #[test]
    fn squaring_matches_iteration() {
        let m = bm("110;011;101");
        for n in 1..=20 {
            assert_eq!(power_iterated(&m, n).unwrap(), power_by_squaring(&m, n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn norm_sequence_examples() {
        let seq = |m: &BitMatrix, h| -> Vec<u64> {
            norm_sequence(m, h).iter().map(|v| v.try_into().unwrap()).collect()
        };
        assert_eq!(seq(&make_t(2).unwrap(), 4), vec![3, 4, 5, 6]);
        assert_eq!(seq(&make_j(2).unwrap(), 4), vec![2, 2, 2, 2]);
        assert_eq!(seq(&bm("100;100;110"), 3), vec![4, 4, 4]);
    }

    #[test]
    fn norm_sequence_matches_powers() {
        let m = bm("1101;0110;1000;0011");
        let seq = norm_sequence(&m, 15);
        for (n, v) in seq.iter().enumerate() {
            assert_eq!(*v, power(&m, n + 1).unwrap().norm());
        }
    }

    #[test]
    fn constructors() {
        assert_eq!(make_t(2).unwrap().to_text(), "10;11");
        assert_eq!(make_l(3).unwrap().to_text(), "000;100;110");
        let j3 = make_j(3).unwrap();
        assert_eq!(j3.to_text(), "010;001;100");
        assert!(j3.get(1, 2) && j3.get(2, 3) && j3.get(3, 1));
        assert_eq!(make_l(1).unwrap().to_text(), "0");
        assert!(make_j(1).is_err());
        assert!(make_t(0).is_err());
        assert!(make_i(65).is_err());
    }

    #[test]
    fn block_compose_examples() {
        let c = block_compose(&make_i(1).unwrap(), &make_l(2).unwrap()).unwrap();
        assert_eq!(c.to_text(), "100;100;110");
        let c = block_compose(&make_j(2).unwrap(), &make_l(1).unwrap()).unwrap();
        assert_eq!(c.to_text(), "010;100;110");
        let i2 = make_i(2).unwrap();
        assert_eq!(block_compose(&i2, &BitMatrix::empty()).unwrap(), i2);
    }

    #[test]
    fn p1_examples() {
        for b in 2..6 {
            assert!(satisfies_p1(&make_i(b).unwrap()));
        }
        assert_eq!(p1_witness(&bm("01;00")), Some(2));
        assert_eq!(check_p1(&bm("01;00")), Err(Error::P1Violation { witness: 2 }));
        assert!(satisfies_p1(&bm("10;00")));
    }

    #[test]
    fn binomial_values() {
        assert_eq!(binomial(4, 2), BigUint::from(6u32));
        assert_eq!(binomial(5, 3), BigUint::from(10u32));
        assert_eq!(binomial(3, 5), BigUint::zero());
        assert_eq!(binomial(28, 21), BigUint::from(1_184_040u32));
        assert_eq!(binomial(0, 0), BigUint::one());
    }

    #[test]
    fn parse_and_render() {
        let m = bm("110;010;001");
        assert_eq!(m.to_text(), "110;010;001");
        assert_eq!(BitMatrix::parse("110\n010\r\n001\n\n").unwrap(), m);
        assert!(BitMatrix::parse("11;1").is_err());
        assert!(BitMatrix::parse("1 0;01").is_err());
        assert!(BitMatrix::parse("1").is_err());
        assert_eq!(BitMatrix::parse("00;00"), Err(Error::ZeroMatrix));
        assert!(BitMatrix::parse("12;01").is_err());
        assert_eq!(m.to_lines(), "110\n010\n001\n");
    }

    #[test]
    fn index_roundtrip() {
        for idx in 1..512u64 {
            let m = BitMatrix::from_index(3, idx).unwrap();
            assert_eq!(m.index(), idx);
        }
        assert_eq!(BitMatrix::from_index(2, 0), Err(Error::ZeroMatrix));
        assert!(BitMatrix::from_index(2, 16).is_err());
    }

    #[test]
    fn nat_json_uses_strings() {
        let json = serde_json::to_string(&nat(&[&[1, 0], &[2, 1]])).unwrap();
        assert_eq!(json, r#"[["1","0"],["2","1"]]"#);
    }

    #[test]
    fn nilpotent_and_cyclic_powers() {
        for k in 1..=12 {
            assert!(power(&make_l(k).unwrap(), k).unwrap().is_zero(), "L_{k}");
        }
        for k in 2..=12 {
            assert_eq!(power(&make_j(k).unwrap(), k).unwrap(), NatMatrix::identity(k), "J_{k}");
        }
    }

    #[test]
    fn strict_lower_power_sum() {
        for b in 2..=12usize {
            let l = make_l(b - 1).unwrap();
            let mut total = BigUint::from(b);
            for i in 1..=b.saturating_sub(2) {
                total += power(&l, i).unwrap().norm();
            }
            assert_eq!(total, BigUint::one() << (b - 1), "b={b}");
        }
    }
}
