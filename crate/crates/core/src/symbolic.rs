//! Admissible words: finite words whose consecutive letter pairs index
//! ones of the matrix, and the space of admissible infinite words.

use std::fmt;

use num_bigint::BigUint;
use num_rational::Ratio;
use num_traits::{One, ToPrimitive, Zero};
use serde::ser::{Serialize, Serializer};

use crate::digraph::{self, ComponentKind};
use crate::error::{Error, Result};
use crate::matrix::{check_member_p1, norm_sequence, power, BitMatrix};

/// Default ceiling on the number of words [`admissible_words`] materializes.
pub const DEFAULT_WORD_CAP: usize = 1_000_000;

/// A finite word over `{1, ..., b}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<usize>);

impl Word {
    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn head(&self) -> Option<usize> {
        self.0.first().copied()
    }

    pub fn tail(&self) -> Option<usize> {
        self.0.last().copied()
    }

    /// Letters run together when `b <= 9`, comma-separated otherwise.
    pub fn render(&self, b: usize) -> String {
        render_letters(&self.0, b)
    }

    pub fn is_admissible(&self, m: &BitMatrix) -> bool {
        self.0.iter().all(|&l| (1..=m.size()).contains(&l)) && self.0.windows(2).all(|w| m.get(w[0], w[1]))
    }
}

pub(crate) fn render_letters(letters: &[usize], b: usize) -> String {
    if b <= 9 {
        letters.iter().map(|l| l.to_string()).collect()
    } else {
        letters.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
    }
}

/// An ultimately periodic infinite word `preperiod · period^∞`, kept in
/// normal form: the period is primitive and the preperiod is as short as
/// possible.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct InfiniteWordDescriptor {
    preperiod: Vec<usize>,
    period: Vec<usize>,
}

impl InfiniteWordDescriptor {
    pub fn new(preperiod: Vec<usize>, period: Vec<usize>) -> Result<Self> {
        if period.is_empty() {
            return Err(Error::Parse("period must be nonempty".into()));
        }
        let mut period = primitive_root(period);
        let mut preperiod = preperiod;
        while let (Some(&a), Some(&b)) = (preperiod.last(), period.last()) {
            if a != b {
                break;
            }
            preperiod.pop();
            period.rotate_right(1);
        }
        Ok(Self { preperiod, period })
    }

    /// `u^∞`.
    pub fn periodic(period: Vec<usize>) -> Result<Self> {
        Self::new(Vec::new(), period)
    }

    pub fn preperiod(&self) -> &[usize] {
        &self.preperiod
    }

    pub fn period(&self) -> &[usize] {
        &self.period
    }

    /// Letter at 1-based position `k`.
    pub fn letter_at(&self, k: usize) -> usize {
        let pre = self.preperiod.len();
        if k <= pre {
            self.preperiod[k - 1]
        } else {
            self.period[(k - pre - 1) % self.period.len()]
        }
    }

    pub fn head(&self) -> usize {
        self.letter_at(1)
    }

    /// Letter set of the whole word.
    pub fn letters(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.preperiod.iter().chain(&self.period).copied().collect();
        v.sort_unstable();
        v.dedup();
        v
    }

    /// First `len` letters.
    pub fn prefix(&self, len: usize) -> Vec<usize> {
        (1..=len).map(|k| self.letter_at(k)).collect()
    }

    pub fn is_admissible(&self, m: &BitMatrix) -> bool {
        let span = self.preperiod.len() + self.period.len() + 1;
        Word(self.prefix(span)).is_admissible(m)
    }

    /// `"32(1)^inf"` style rendering.
    pub fn render(&self, b: usize) -> String {
        let pre = render_letters(&self.preperiod, b);
        let sep = if b > 9 && !pre.is_empty() { "," } else { "" };
        format!("{pre}{sep}({})^inf", render_letters(&self.period, b))
    }

    /// Parses the rendering produced by [`InfiniteWordDescriptor::render`].
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("malformed infinite word {text:?}"));
        let body = text.strip_suffix(")^inf").ok_or_else(bad)?;
        let (pre, period) = body.split_once('(').ok_or_else(bad)?;
        let commas = body.contains(',');
        let letters = |s: &str| -> Result<Vec<usize>> {
            let s = s.trim_end_matches(',');
            if s.is_empty() {
                return Ok(Vec::new());
            }
            if commas {
                s.split(',').map(|x| x.parse().map_err(|_| bad())).collect()
            } else {
                s.chars().map(|c| c.to_digit(10).map(|d| d as usize).ok_or_else(bad)).collect()
            }
        };
        Self::new(letters(pre)?, letters(period)?)
    }

    fn comparison_horizon(&self, other: &Self) -> usize {
        self.preperiod.len().max(other.preperiod.len()) + self.period.len() * other.period.len()
    }
}

impl fmt::Display for InfiniteWordDescriptor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let widest = self.preperiod.iter().chain(&self.period).copied().max().unwrap_or(0);
        f.write_str(&self.render(widest))
    }
}

impl Serialize for InfiniteWordDescriptor {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

fn primitive_root(period: Vec<usize>) -> Vec<usize> {
    let p = period.len();
    for d in 1..p {
        if p.is_multiple_of(d) && (d..p).all(|k| period[k] == period[k - d]) {
            return period[..d].to_vec();
        }
    }
    period
}

fn word_count(m: &BitMatrix, n: usize) -> BigUint {
    if n == 1 {
        BigUint::from(m.size())
    } else {
        norm_sequence(m, n - 1).pop().unwrap_or_default()
    }
}

pub fn admissible_words(m: &BitMatrix, n: usize) -> Result<Vec<Word>> {
    admissible_words_capped(m, n, DEFAULT_WORD_CAP)
}

/// All admissible words of length `n`, in lexicographic order. Refuses with
/// [`Error::WordCap`] (carrying the exact count) when there are more than
/// `cap` of them. Length 1 yields every single letter.
pub fn admissible_words_capped(m: &BitMatrix, n: usize, cap: usize) -> Result<Vec<Word>> {
    if n == 0 {
        return Err(Error::OutOfRange { value: 0, expected: "length >= 1" });
    }
    let count = word_count(m, n);
    if count > BigUint::from(cap) {
        return Err(Error::WordCap { count: count.to_str_radix(10), cap });
    }
    let mut out = Vec::with_capacity(count.to_usize().unwrap_or(0));
    for head in 0..m.size() {
        extend_words(m, vec![head + 1], n, None, &mut out);
    }
    Ok(out)
}

/// Admissible words of length `n >= 2` with head `i` and tail `j`.
pub fn admissible_words_between(m: &BitMatrix, n: usize, i: usize, j: usize) -> Result<Vec<Word>> {
    if n < 2 {
        return Err(Error::OutOfRange { value: n, expected: "length >= 2" });
    }
    for v in [i, j] {
        if !(1..=m.size()).contains(&v) {
            return Err(Error::IndexOutOfRange { index: v, size: m.size() });
        }
    }
    let count = power(m, n - 1)?.get(i, j).clone();
    if count > BigUint::from(DEFAULT_WORD_CAP) {
        return Err(Error::WordCap { count: count.to_str_radix(10), cap: DEFAULT_WORD_CAP });
    }
    let mut out = Vec::new();
    extend_words(m, vec![i], n, Some(j), &mut out);
    Ok(out)
}

/// Depth-first extension of `prefix` to length `n`, successors in
/// ascending order, with an explicit stack.
fn extend_words(m: &BitMatrix, prefix: Vec<usize>, n: usize, tail: Option<usize>, out: &mut Vec<Word>) {
    let mut stack = vec![prefix];
    while let Some(w) = stack.pop() {
        if w.len() == n {
            if tail.is_none_or(|t| w[n - 1] == t) {
                out.push(Word(w));
            }
            continue;
        }
        let last = *w.last().expect("words are nonempty");
        let row = m.rows()[last - 1];
        // push in descending order so ascending successors pop first
        for s in (0..m.size()).rev() {
            if row >> s & 1 == 1 {
                let mut next = w.clone();
                next.push(s + 1);
                stack.push(next);
            }
        }
    }
}

/// A point of the word space: a finite word or an ultimately periodic one.
#[derive(Debug, Clone, Copy)]
pub enum WordPoint<'a> {
    Finite(&'a [usize]),
    Infinite(&'a InfiniteWordDescriptor),
}

impl WordPoint<'_> {
    fn letter(&self, k: usize) -> Option<usize> {
        match self {
            WordPoint::Finite(w) => w.get(k - 1).copied(),
            WordPoint::Infinite(d) => Some(d.letter_at(k)),
        }
    }

    fn check_alphabet(&self, b: usize) -> Result<()> {
        let letters: Vec<usize> = match self {
            WordPoint::Finite(w) => w.to_vec(),
            WordPoint::Infinite(d) => d.letters(),
        };
        match letters.into_iter().find(|&l| l == 0 || l > b) {
            Some(letter) => Err(Error::AlphabetMismatch { letter, alphabet: b }),
            None => Ok(()),
        }
    }
}

/// `0` if `u = v`, otherwise `b^(-k)` with `k` the first position where the
/// words differ.
pub fn metric_distance(u: WordPoint<'_>, v: WordPoint<'_>, b: usize) -> Result<Ratio<BigUint>> {
    u.check_alphabet(b)?;
    v.check_alphabet(b)?;
    let horizon = match (u, v) {
        (WordPoint::Infinite(x), WordPoint::Infinite(y)) => x.comparison_horizon(y),
        (WordPoint::Finite(x), WordPoint::Finite(y)) => x.len().max(y.len()),
        (WordPoint::Finite(x), _) | (_, WordPoint::Finite(x)) => x.len() + 1,
    };
    for k in 1..=horizon {
        match (u.letter(k), v.letter(k)) {
            (Some(a), Some(c)) if a == c => continue,
            (Some(_), Some(_)) => {
                return Ok(Ratio::new(BigUint::one(), BigUint::from(b).pow(k as u32)));
            }
            (None, None) => break,
            _ => return Err(Error::LengthMismatch),
        }
    }
    Ok(Ratio::from_integer(BigUint::zero()))
}

/// The unique periodic admissible word with head `i`, for `i` on a cycle of
/// a matrix satisfying P2.
pub fn periodic_word(m: &BitMatrix, i: usize) -> Result<InfiniteWordDescriptor> {
    if !(1..=m.size()).contains(&i) {
        return Err(Error::IndexOutOfRange { index: i, size: m.size() });
    }
    digraph::check_p2(m)?;
    let part = digraph::sccs(m);
    let c = part.component_of[i - 1];
    if part.components[c].kind == ComponentKind::Trivial {
        return Err(Error::NotOnCycle(i));
    }
    InfiniteWordDescriptor::periodic(digraph::cycle_word(m, part.mask(c), i - 1))
}

/// Shape of the space of admissible infinite words.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum InfiniteCensus {
    /// Every word, in ascending (preperiod, period) order.
    Finite(Vec<InfiniteWordDescriptor>),
    CountablyInfinite,
    PositiveDimension,
}

impl InfiniteCensus {
    pub fn label(&self) -> &'static str {
        match self {
            InfiniteCensus::Finite(_) => "finite",
            InfiniteCensus::CountablyInfinite => "countably_infinite",
            InfiniteCensus::PositiveDimension => "positive_dimension",
        }
    }
}

/// First `(i, j)` (1-based) with `i` on a cycle and `j` reachable from `i`
/// with out-degree other than 1. `None` means every cycle vertex has a
/// unique infinite continuation.
pub(crate) fn reachable_branching(m: &BitMatrix) -> Option<(usize, usize)> {
    let part = digraph::sccs(m);
    let d = digraph::d_mask(&part);
    let reach = digraph::reach_masks(m);
    digraph::mask_to_vertices(d).into_iter().find_map(|i| {
        digraph::mask_to_vertices(reach[i - 1])
            .into_iter()
            .find(|&j| m.out_degree(j - 1) != 1)
            .map(|j| (i, j))
    })
}

pub fn infinite_word_census(m: &BitMatrix) -> Result<InfiniteCensus> {
    check_member_p1(m)?;
    if !digraph::satisfies_p2(m) {
        return Ok(InfiniteCensus::PositiveDimension);
    }
    if reachable_branching(m).is_some() {
        return Ok(InfiniteCensus::CountablyInfinite);
    }
    Ok(InfiniteCensus::Finite(enumerate_finite_space(m)))
}

/// Under P2 with no reachable branching: the pure periodic words of the
/// cycle vertices, plus every path through off-cycle vertices (each used at
/// most once) that then enters a cycle.
fn enumerate_finite_space(m: &BitMatrix) -> Vec<InfiniteWordDescriptor> {
    let part = digraph::sccs(m);
    let d = digraph::d_mask(&part);
    let cycle_of = |v: usize| {
        let c = part.component_of[v];
        digraph::cycle_word(m, part.mask(c), v)
    };
    let mut words = Vec::new();
    for v in 0..m.size() {
        if d >> v & 1 == 1 {
            words.push(InfiniteWordDescriptor::new(Vec::new(), cycle_of(v)).expect("nonempty"));
            continue;
        }
        let mut stack = vec![vec![v]];
        while let Some(path) = stack.pop() {
            let last = *path.last().expect("nonempty");
            let mut row = m.rows()[last];
            while row != 0 {
                let s = row.trailing_zeros() as usize;
                row &= row - 1;
                if d >> s & 1 == 1 {
                    let pre = path.iter().map(|x| x + 1).collect();
                    words.push(InfiniteWordDescriptor::new(pre, cycle_of(s)).expect("nonempty"));
                } else {
                    let mut next = path.clone();
                    next.push(s);
                    stack.push(next);
                }
            }
        }
    }
    words.sort();
    words
}

/// Exact number of admissible infinite words in the bounded class.
pub fn count_infinite(m: &BitMatrix) -> Result<u64> {
    match infinite_word_census(m)? {
        InfiniteCensus::Finite(words) => Ok(words.len() as u64),
        _ => Err(Error::Unbounded),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::equivalence::extremal_sup_forms;
    use crate::matrix::{make_i, make_j, make_l, make_t};

    fn bm(s: &str) -> BitMatrix {
        s.parse().unwrap()
    }

    fn rendered(ws: &[Word]) -> Vec<String> {
        ws.iter().map(|w| w.render(9)).collect()
    }

    fn desc(s: &str) -> InfiniteWordDescriptor {
        InfiniteWordDescriptor::parse(s).unwrap()
    }

    #[test]
    fn word_examples() {
        let t2 = make_t(2).unwrap();
        assert_eq!(rendered(&admissible_words(&t2, 2).unwrap()), ["11", "21", "22"]);
        for n in 1..=8 {
            assert_eq!(admissible_words(&t2, n + 1).unwrap().len(), n + 2);
        }
        assert_eq!(rendered(&admissible_words(&make_i(2).unwrap(), 4).unwrap()), ["1111", "2222"]);
        assert_eq!(admissible_words(&t2, 1).unwrap().len(), 2);
        assert!(admissible_words(&t2, 0).is_err());
    }

    #[test]
    fn word_cap() {
        let full = bm("111;111;111");
        assert_eq!(
            admissible_words_capped(&full, 8, 1000),
            Err(Error::WordCap { count: "6561".into(), cap: 1000 })
        );
        assert_eq!(admissible_words_capped(&full, 8, 6561).unwrap().len(), 6561);
    }

    #[test]
    fn words_between_examples() {
        let t3 = make_t(3).unwrap();
        assert_eq!(admissible_words_between(&t3, 3, 3, 1).unwrap().len(), 3);
        assert_eq!(power(&t3, 2).unwrap().get(3, 1), &BigUint::from(3u32));
        assert_eq!(rendered(&admissible_words_between(&make_j(2).unwrap(), 3, 1, 1).unwrap()), ["121"]);
        let l2 = make_l(2).unwrap();
        assert!(admissible_words_between(&l2, 3, 1, 2).unwrap().is_empty());
        assert!(admissible_words_between(&l2, 1, 1, 1).is_err());
        assert!(admissible_words_between(&l2, 3, 1, 3).is_err());
    }

    #[test]
    fn metric_examples() {
        let u = desc("(12)^inf");
        let d = metric_distance(WordPoint::Infinite(&u), WordPoint::Infinite(&u), 2).unwrap();
        assert!(d.is_zero());

        let a = desc("(1)^inf");
        let b = desc("(2)^inf");
        let d = metric_distance(WordPoint::Infinite(&a), WordPoint::Infinite(&b), 2).unwrap();
        assert_eq!(d, Ratio::new(BigUint::one(), BigUint::from(2u32)));

        let d = metric_distance(WordPoint::Finite(&[1, 1, 2]), WordPoint::Finite(&[1, 1, 3]), 3).unwrap();
        assert_eq!(d, Ratio::new(BigUint::one(), BigUint::from(27u32)));

        assert_eq!(
            metric_distance(WordPoint::Finite(&[1, 1]), WordPoint::Finite(&[1, 1, 2]), 3),
            Err(Error::LengthMismatch)
        );
        assert!(matches!(
            metric_distance(WordPoint::Finite(&[1, 4]), WordPoint::Finite(&[1, 1]), 3),
            Err(Error::AlphabetMismatch { letter: 4, alphabet: 3 })
        ));
        // equal words written differently
        let x = InfiniteWordDescriptor::new(vec![1, 2], vec![1, 2]).unwrap();
        let d = metric_distance(WordPoint::Infinite(&x), WordPoint::Infinite(&u), 2).unwrap();
        assert!(d.is_zero());
    }

    #[test]
    fn descriptor_normal_form() {
        let d = InfiniteWordDescriptor::new(vec![3, 1, 2], vec![1, 2, 1, 2]).unwrap();
        assert_eq!(d.preperiod(), &[3]);
        assert_eq!(d.period(), &[1, 2]);
        assert_eq!(d.to_string(), "3(12)^inf");
        assert_eq!(desc("32(1)^inf").to_string(), "32(1)^inf");
        assert!(InfiniteWordDescriptor::new(vec![], vec![]).is_err());
        let wide = InfiniteWordDescriptor::new(vec![10], vec![1]).unwrap();
        assert_eq!(wide.render(10), "10,(1)^inf");
        assert_eq!(InfiniteWordDescriptor::parse("10,(1)^inf").unwrap(), wide);
    }

    #[test]
    fn periodic_word_examples() {
        assert_eq!(periodic_word(&make_j(2).unwrap(), 1).unwrap().to_string(), "(12)^inf");
        assert_eq!(periodic_word(&bm("10;10"), 1).unwrap().to_string(), "(1)^inf");
        assert_eq!(periodic_word(&make_j(3).unwrap(), 2).unwrap().to_string(), "(231)^inf");
        assert_eq!(periodic_word(&bm("10;10"), 2), Err(Error::NotOnCycle(2)));
        assert!(matches!(periodic_word(&bm("11;10"), 1), Err(Error::P2Violation { .. })));
    }

    #[test]
    fn census_examples() {
        let m = bm("100;100;110");
        let InfiniteCensus::Finite(words) = infinite_word_census(&m).unwrap() else {
            panic!("expected a finite census");
        };
        let mut got: Vec<String> = words.iter().map(|w| w.to_string()).collect();
        got.sort();
        assert_eq!(got, ["(1)^inf", "2(1)^inf", "3(1)^inf", "32(1)^inf"]);
        assert_eq!(words.len(), 4);

        assert_eq!(infinite_word_census(&bm("11;10")).unwrap(), InfiniteCensus::PositiveDimension);
        assert_eq!(infinite_word_census(&make_t(2).unwrap()).unwrap(), InfiniteCensus::CountablyInfinite);
        assert_eq!(infinite_word_census(&bm("01;00")), Err(Error::P1Violation { witness: 2 }));
    }

    #[test]
    fn count_examples() {
        assert_eq!(count_infinite(&make_i(2).unwrap()).unwrap(), 2);
        assert_eq!(count_infinite(&extremal_sup_forms(4).unwrap()[0]).unwrap(), 8);
        assert_eq!(count_infinite(&bm("10;10")).unwrap(), 2);
        assert_eq!(count_infinite(&make_t(3).unwrap()), Err(Error::Unbounded));
    }

    #[test]
    fn census_words_are_admissible_and_distinct() {
        for idx in 1..512u64 {
            let m = BitMatrix::from_index(3, idx).unwrap();
            if let Ok(InfiniteCensus::Finite(words)) = infinite_word_census(&m) {
                for w in &words {
                    assert!(w.is_admissible(&m), "{m} {w}");
                }
                for pair in words.windows(2) {
                    let d = metric_distance(WordPoint::Infinite(&pair[0]), WordPoint::Infinite(&pair[1]), 3)
                        .unwrap();
                    assert!(!d.is_zero(), "{m}: duplicate {}", pair[0]);
                }
            }
        }
    }
}
