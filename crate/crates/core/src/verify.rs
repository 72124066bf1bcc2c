//! Exhaustive re-checking of the growth statements over small matrix
//! spaces.
//!
//! Each claim sweeps a population (matrices or parameter tuples), checks
//! every member against an independent oracle and records the failures.
//! A clean report has an empty counterexample list.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::classifier::{self, is_binomial_extremal, is_sup_extremal, GrowthClass};
use crate::digraph::{self, cycle_structure, p2_power_oracle, satisfies_p2};
use crate::equivalence::{
    apply_permutation, canonical_form, extremal_targets, is_strictly_lower_triangular,
    is_strictly_lower_triangularizable, Permutation,
};
use crate::error::{Error, Result};
use crate::matrix::{
    binomial, block_compose, make_l, make_t, norm_sequence, power, satisfies_p1, BitMatrix, NatMatrix,
};
use crate::symbolic::{admissible_words, count_infinite, infinite_word_census, InfiniteCensus, Word};

pub const DEFAULT_SEED: u64 = 0x6e67_2024;
pub const DEFAULT_RANDOM_SAMPLES: usize = 200;

/// Population filter for [`enumerate_matrices`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Filter {
    All,
    P1,
    P1P2,
}

impl Filter {
    pub fn accepts(self, m: &BitMatrix) -> bool {
        match self {
            Filter::All => true,
            Filter::P1 => satisfies_p1(m),
            Filter::P1P2 => satisfies_p1(m) && satisfies_p2(m),
        }
    }

    pub fn id(self) -> &'static str {
        match self {
            Filter::All => "all",
            Filter::P1 => "p1",
            Filter::P1P2 => "p1p2",
        }
    }
}

impl FromStr for Filter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "all" => Ok(Filter::All),
            "p1" => Ok(Filter::P1),
            "p1p2" | "p1-p2" | "p1,p2" => Ok(Filter::P1P2),
            _ => Err(Error::Parse(format!("unknown filter {s:?} (all, p1, p1p2)"))),
        }
    }
}

fn index_space(b: usize) -> Result<u64> {
    if !(2..=5).contains(&b) {
        return Err(Error::OutOfRange { value: b, expected: "enumeration side 2..=5" });
    }
    Ok(1u64 << (b * b))
}

/// Every nonzero `b x b` matrix accepted by `filter`, ordered by
/// [`BitMatrix::index`].
pub fn enumerate_matrices(b: usize, filter: Filter) -> Result<impl Iterator<Item = BitMatrix>> {
    let end = index_space(b)?;
    Ok((1..end).filter_map(move |idx| {
        let m = BitMatrix::from_index(b, idx).expect("index below 2^(b*b)");
        filter.accepts(&m).then_some(m)
    }))
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Counterexample {
    pub matrix: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerificationReport {
    pub claim_id: String,
    #[serde(serialize_with = "crate::json::u64_str")]
    pub population: u64,
    #[serde(serialize_with = "crate::json::u64_str")]
    pub passes: u64,
    pub counterexamples: Vec<Counterexample>,
    pub parameters: BTreeMap<String, String>,
    #[serde(serialize_with = "crate::json::u64_str")]
    pub elapsed_ms: u64,
}

impl VerificationReport {
    pub fn is_clean(&self) -> bool {
        self.counterexamples.is_empty()
    }

    /// JSON with `elapsed_ms` zeroed, for byte comparison between runs.
    pub fn deterministic_json(&self) -> String {
        let mut r = self.clone();
        r.elapsed_ms = 0;
        serde_json::to_string(&r).expect("report serializes")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "claim {}: {}/{} passed, {} counterexample(s), {} ms\n",
            self.claim_id,
            self.passes,
            self.population,
            self.counterexamples.len(),
            self.elapsed_ms
        );
        for (k, v) in &self.parameters {
            out.push_str(&format!("  {k} = {v}\n"));
        }
        for c in &self.counterexamples {
            out.push_str(&format!("  COUNTEREXAMPLE {}: {}\n", c.matrix, c.detail));
        }
        out
    }
}

/// Population count plus failures keyed by their position in the sweep.
#[derive(Debug, Default, Clone, PartialEq, Eq)]
pub struct Tally {
    pub population: u64,
    pub failures: Vec<(u64, Counterexample)>,
}

impl Tally {
    fn merge(mut self, other: Tally) -> Tally {
        self.population += other.population;
        self.failures.extend(other.failures);
        self
    }

    fn record(&mut self, key: u64, label: impl FnOnce() -> String, outcome: Option<String>) {
        self.population += 1;
        if let Some(detail) = outcome {
            self.failures.push((key, Counterexample { matrix: label(), detail }));
        }
    }

    fn finish(
        mut self,
        claim: Claim,
        parameters: BTreeMap<String, String>,
        start: Instant,
    ) -> VerificationReport {
        self.failures.sort_by_key(|(k, _)| *k);
        let counterexamples: Vec<Counterexample> = self.failures.into_iter().map(|(_, c)| c).collect();
        VerificationReport {
            claim_id: claim.id().to_string(),
            population: self.population,
            passes: self.population - counterexamples.len() as u64,
            counterexamples,
            parameters,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }
}

/// The checkable statements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Claim {
    Trichotomy,
    SupExtremal,
    InfiniteWordExtremal,
    BinomialExtremal,
    TbBinomial,
    Identities,
    WordNormBridge,
    Nilpotency,
    P2Dual,
    Stabilization,
    Census,
    CycleStructure,
}

impl Claim {
    pub const ALL: [Claim; 12] = [
        Claim::Trichotomy,
        Claim::SupExtremal,
        Claim::InfiniteWordExtremal,
        Claim::BinomialExtremal,
        Claim::TbBinomial,
        Claim::Identities,
        Claim::WordNormBridge,
        Claim::Nilpotency,
        Claim::P2Dual,
        Claim::Stabilization,
        Claim::Census,
        Claim::CycleStructure,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Claim::Trichotomy => "trichotomy",
            Claim::SupExtremal => "sup_extremal",
            Claim::InfiniteWordExtremal => "infinite_word_extremal",
            Claim::BinomialExtremal => "binomial_extremal",
            Claim::TbBinomial => "tb_binomial",
            Claim::Identities => "identities",
            Claim::WordNormBridge => "word_norm_bridge",
            Claim::Nilpotency => "nilpotency",
            Claim::P2Dual => "p2_dual",
            Claim::Stabilization => "stabilization",
            Claim::Census => "census",
            Claim::CycleStructure => "cycle_structure",
        }
    }

    /// Default `(b, horizon)`. For `tb_binomial`, `identities` and
    /// `word_norm_bridge` these are upper limits rather than a single side.
    pub fn defaults(self) -> (usize, usize) {
        match self {
            Claim::TbBinomial => (8, 20),
            Claim::Identities => (10, 10),
            Claim::WordNormBridge => (3, 6),
            _ => (4, classifier::DEFAULT_HORIZON),
        }
    }
}

impl fmt::Display for Claim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for Claim {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Claim::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| {
            let ids: Vec<&str> = Claim::ALL.iter().map(|c| c.id()).collect();
            Error::Parse(format!("unknown claim {s:?} (one of {})", ids.join(", ")))
        })
    }
}

pub type Classifier = dyn Fn(&BitMatrix) -> Result<GrowthClass> + Sync;

/// Sweep configuration.
#[derive(Debug, Clone, Copy)]
pub struct Harness {
    pub parallel: bool,
    /// Permits exhaustive sweeps at `b = 5` (about 3.4e7 matrices).
    pub allow_b5: bool,
    pub seed: u64,
    pub random_samples: usize,
}

impl Default for Harness {
    fn default() -> Self {
        Harness {
            parallel: true,
            allow_b5: false,
            seed: DEFAULT_SEED,
            random_samples: DEFAULT_RANDOM_SAMPLES,
        }
    }
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

fn params<const N: usize>(pairs: [(&str, String); N]) -> BTreeMap<String, String> {
    pairs.into_iter().map(|(k, v)| (k.to_string(), v)).collect()
}

fn first_mismatch(seq: &[BigUint], mut ok: impl FnMut(usize, &BigUint) -> bool) -> Option<(usize, &BigUint)> {
    seq.iter().enumerate().map(|(k, v)| (k + 1, v)).find(|&(n, v)| !ok(n, v))
}

impl Harness {
    fn exhaustive_side(&self, b: usize) -> Result<()> {
        match b {
            2..=4 => Ok(()),
            5 if self.allow_b5 => Ok(()),
            5 => Err(Error::OutOfRange { value: 5, expected: "side 2..=4; 5 needs the opt-in flag" }),
            _ => Err(Error::OutOfRange { value: b, expected: "side 2..=4" }),
        }
    }

    /// Runs `check` over the filtered population at side `b`. Failures come
    /// back sorted by matrix index, so serial and parallel runs agree.
    pub fn sweep<F>(&self, b: usize, filter: Filter, check: F) -> Result<Tally>
    where
        F: Fn(&BitMatrix) -> Option<String> + Sync,
    {
        let end = index_space(b)?;
        let visit = |mut t: Tally, idx: u64| {
            let m = BitMatrix::from_index(b, idx).expect("index below 2^(b*b)");
            if filter.accepts(&m) {
                t.record(idx, || m.to_text(), check(&m));
            }
            t
        };
        let mut tally = if self.parallel {
            (1..end).into_par_iter().fold(Tally::default, visit).reduce(Tally::default, Tally::merge)
        } else {
            (1..end).fold(Tally::default(), visit)
        };
        tally.failures.sort_by_key(|(k, _)| *k);
        Ok(tally)
    }

    pub fn run(&self, claim: Claim, b: Option<usize>, horizon: Option<usize>) -> Result<VerificationReport> {
        let (db, dh) = claim.defaults();
        let (b, h) = (b.unwrap_or(db), horizon.unwrap_or(dh));
        match claim {
            Claim::Trichotomy => self.trichotomy(b, h),
            Claim::SupExtremal => self.sup_extremal(b),
            Claim::InfiniteWordExtremal => self.infinite_word_extremal(b),
            Claim::BinomialExtremal => self.binomial_extremal(b, h),
            Claim::TbBinomial => self.tb_binomial(b, h),
            Claim::Identities => self.identities(b, h),
            Claim::WordNormBridge => self.word_norm_bridge(b, h),
            Claim::Nilpotency => self.nilpotency(b),
            Claim::P2Dual => self.p2_dual(b),
            Claim::Stabilization => self.stabilization(b),
            Claim::Census => self.census(b),
            Claim::CycleStructure => self.cycle_structure(b),
        }
    }

    pub fn trichotomy(&self, b: usize, horizon: usize) -> Result<VerificationReport> {
        self.trichotomy_with(b, horizon, &classifier::classify)
    }

    /// Trichotomy sweep with a caller-supplied classifier, so the harness
    /// itself can be shown to catch a wrong one.
    pub fn trichotomy_with(
        &self,
        b: usize,
        horizon: usize,
        classify: &Classifier,
    ) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let bounded_horizon = 2 * b + 4;
        let cap = pow2(b - 1);
        let tally = self.sweep(b, Filter::P1, |m| {
            let class = match classify(m) {
                Ok(c) => c,
                Err(e) => return Some(format!("classifier failed: {e}")),
            };
            let p2 = satisfies_p2(m);
            match class {
                GrowthClass::Exponential { vertex, exponent, diagonal } => {
                    if p2 {
                        return Some("exponential, but P2 holds".into());
                    }
                    if vertex == 0 || vertex > b || exponent == 0 {
                        return Some(format!("malformed certificate ({vertex}, {exponent})"));
                    }
                    let actual = power(m, exponent).ok()?.get(vertex, vertex).clone();
                    if actual != diagonal || actual < BigUint::from(2u32) {
                        return Some(format!(
                            "certificate (M^{exponent})_{vertex}{vertex} = {diagonal}, actual {actual}"
                        ));
                    }
                    let seq = norm_sequence(m, exponent * horizon);
                    (1..=horizon).find_map(|n| {
                        let v = &seq[exponent * n - 1];
                        (*v < pow2(n)).then(|| format!("‖M^{}‖ = {v} < 2^{n}", exponent * n))
                    })
                }
                GrowthClass::Polynomial { head, words, .. } => {
                    if !p2 {
                        return Some("polynomial, but P2 fails".into());
                    }
                    if words[0] == words[1] || words.iter().any(|w| w.head() != head || !w.is_admissible(m)) {
                        return Some(format!("bad word pair {} / {} at head {head}", words[0], words[1]));
                    }
                    let seq = norm_sequence(m, horizon);
                    first_mismatch(&seq, |n, v| {
                        *v >= BigUint::from(n + 2) && *v <= binomial((n + b) as u64, (n + 1) as u64)
                    })
                    .map(|(n, v)| {
                        format!(
                            "‖M^{n}‖ = {v} outside [{}, {}]",
                            n + 2,
                            binomial((n + b) as u64, (n + 1) as u64)
                        )
                    })
                }
                GrowthClass::Bounded { stabilized_norm, census_size } => {
                    if !p2 {
                        return Some("bounded, but P2 fails".into());
                    }
                    let seq = norm_sequence(m, bounded_horizon);
                    if let Some((n, v)) = first_mismatch(&seq, |_, v| *v <= cap) {
                        return Some(format!("‖M^{n}‖ = {v} > 2^{}", b - 1));
                    }
                    let top = seq.iter().max().expect("nonempty horizon");
                    if *top != stabilized_norm {
                        return Some(format!("stabilized norm {stabilized_norm}, observed maximum {top}"));
                    }
                    match count_infinite(m) {
                        Ok(c) if c == census_size => None,
                        other => Some(format!("census size {census_size}, recount {other:?}")),
                    }
                }
            }
        })?;
        Ok(tally.finish(
            Claim::Trichotomy,
            params([
                ("b", b.to_string()),
                ("filter", "p1".into()),
                ("horizon", horizon.to_string()),
                ("bounded_horizon", bounded_horizon.to_string()),
            ]),
            start,
        ))
    }

    /// `sup ‖M^n‖ = 2^(b-1)` iff `M` is similar to one of the three
    /// extremal forms iff `M` has `2^(b-1)` infinite words; plus a final
    /// population item asserting that the maximizers form exactly three
    /// classes.
    pub fn sup_extremal(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let cap = pow2(b - 1);
        let cap_u64 = 1u64 << (b - 1);
        let targets = extremal_targets(b)?;
        let attaining = std::sync::Mutex::new(BTreeSet::new());
        let mut tally = self.sweep(b, Filter::P1, |m| {
            let extremal = match is_sup_extremal(m) {
                Ok(e) => e,
                Err(e) => return Some(format!("is_sup_extremal failed: {e}")),
            };
            let sup = match classifier::sup_norm(m) {
                Ok(s) => Some(s),
                Err(Error::Unbounded) => None,
                Err(e) => return Some(format!("sup_norm failed: {e}")),
            };
            let count = count_infinite(m).ok();
            if let Some(s) = &sup {
                if *s > cap {
                    return Some(format!("sup norm {s} exceeds 2^{}", b - 1));
                }
            }
            let hit = sup.as_ref() == Some(&cap);
            if hit {
                let c = canonical_form(m).expect("side within limit").matrix;
                attaining.lock().expect("set poisoned").insert(c.to_text());
            }
            let by_count = count == Some(cap_u64);
            (hit != extremal || by_count != extremal).then(|| {
                format!(
                    "sup norm {:?}, extremal form {extremal}, infinite words {count:?}",
                    sup.map(|s| s.to_string())
                )
            })
        })?;
        let found = attaining.into_inner().expect("set poisoned");
        let expected: BTreeSet<String> = targets.sup_forms.iter().map(|f| f.to_text()).collect();
        let outcome = (found != expected || expected.len() != 3)
            .then(|| format!("maximizing classes {:?}, expected the three classes {:?}", found, expected));
        tally.record(u64::MAX, || "(class census)".into(), outcome);
        Ok(tally.finish(
            Claim::SupExtremal,
            params([("b", b.to_string()), ("filter", "p1".into()), ("classes", found.len().to_string())]),
            start,
        ))
    }

    pub fn infinite_word_extremal(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let cap = 1u64 << (b - 1);
        let tally = self.sweep(b, Filter::P1, |m| {
            let count = count_infinite(m).ok();
            match is_sup_extremal(m) {
                Ok(e) if e == (count == Some(cap)) => None,
                Ok(e) => Some(format!("infinite words {count:?}, extremal form {e}")),
                Err(e) => Some(format!("is_sup_extremal failed: {e}")),
            }
        })?;
        Ok(tally.finish(
            Claim::InfiniteWordExtremal,
            params([("b", b.to_string()), ("filter", "p1".into())]),
            start,
        ))
    }

    /// Over P1: equality with `C(n+b, n+1)` for every `n <= horizon` holds
    /// exactly on the class of `T_b`; under P2 the binomial is also an upper
    /// bound.
    pub fn binomial_extremal(&self, b: usize, horizon: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let bounds: Vec<BigUint> = (1..=horizon).map(|n| binomial((n + b) as u64, (n + 1) as u64)).collect();
        let tally = self.sweep(b, Filter::P1, |m| {
            let seq = norm_sequence(m, horizon);
            if satisfies_p2(m) {
                if let Some((n, v)) = first_mismatch(&seq, |n, v| *v <= bounds[n - 1]) {
                    return Some(format!("‖M^{n}‖ = {v} > C({}, {}) = {}", n + b, n + 1, bounds[n - 1]));
                }
            }
            let equal = seq == bounds;
            match is_binomial_extremal(m) {
                Ok(e) if e == equal => None,
                Ok(e) => {
                    Some(format!("binomial equality through n = {horizon}: {equal}, similar to T_b: {e}"))
                }
                Err(e) => Some(format!("is_binomial_extremal failed: {e}")),
            }
        })?;
        Ok(tally.finish(
            Claim::BinomialExtremal,
            params([
                ("b", b.to_string()),
                ("filter", "p1 (upper bound checked on p1p2)".into()),
                ("horizon", horizon.to_string()),
            ]),
            start,
        ))
    }

    /// `‖T_b^n‖ = C(n+b, n+1)` by exact matrix powers.
    pub fn tb_binomial(&self, max_b: usize, max_n: usize) -> Result<VerificationReport> {
        if !(2..=64).contains(&max_b) {
            return Err(Error::OutOfRange { value: max_b, expected: "2..=64" });
        }
        let start = Instant::now();
        let mut tally = Tally::default();
        for b in 2..=max_b {
            let t = make_t(b)?;
            let mut acc = t.to_nat();
            for n in 1..=max_n {
                if n > 1 {
                    acc = acc.multiply(&t.to_nat())?;
                }
                let (lhs, rhs) = (acc.norm(), binomial((n + b) as u64, (n + 1) as u64));
                let key = (b * 1000 + n) as u64;
                tally.record(
                    key,
                    || format!("T_{b}, n = {n}"),
                    (lhs != rhs).then(|| format!("{lhs} != {rhs}")),
                );
            }
        }
        Ok(tally.finish(
            Claim::TbBinomial,
            params([("max_b", max_b.to_string()), ("max_n", max_n.to_string())]),
            start,
        ))
    }

    /// The binomial identities, the strict-lower-triangle sum, and the
    /// orthogonal block identity.
    pub fn identities(&self, max_b: usize, max_n: usize) -> Result<VerificationReport> {
        if !(2..=60).contains(&max_b) {
            return Err(Error::OutOfRange { value: max_b, expected: "2..=60" });
        }
        let start = Instant::now();
        let mut tally = Tally::default();
        let mut key = 0u64;
        let mut next = || {
            key += 1;
            key
        };
        let c = |n: usize, k: usize| binomial(n as u64, k as u64);

        // C(1+b,1) + C(1+b,2) + C(2+b,3) + ... + C(n-1+b,n) = C(n+b,n)
        for b in 1..=max_b {
            for n in 1..=max_n {
                let lhs = c(1 + b, 1) + (1..n).map(|j| c(j + b, j + 1)).sum::<BigUint>();
                let rhs = c(n + b, n);
                tally.record(
                    next(),
                    || format!("telescoping b = {b}, n = {n}"),
                    (lhs != rhs).then(|| format!("{lhs} != {rhs}")),
                );
            }
        }

        // k C(n+b-k, n) + C(n+b-k, n+1) <= C(n+b, n+1), equality iff k = 1
        for b in 2..=max_b {
            for k in 1..b {
                for n in 1..=max_n {
                    let lhs = BigUint::from(k) * c(n + b - k, n) + c(n + b - k, n + 1);
                    let rhs = c(n + b, n + 1);
                    let bad = lhs > rhs || (lhs == rhs) != (k == 1);
                    tally.record(
                        next(),
                        || format!("k-inequality k = {k}, b = {b}, n = {n}"),
                        bad.then(|| format!("lhs {lhs}, rhs {rhs}")),
                    );
                }
            }
        }

        // b + ‖L_{b-1}‖ + ... + ‖L_{b-1}^{b-2}‖ = 2^(b-1)
        let lower_max_b = max_b.max(12);
        for b in 2..=lower_max_b {
            let l = make_l(b - 1)?;
            let mut total = BigUint::from(b);
            for k in 1..=b - 2 {
                total += power(&l, k)?.norm();
            }
            let want = pow2(b - 1);
            tally.record(
                next(),
                || format!("lower-triangle sum b = {b}"),
                (total != want).then(|| format!("{total} != {want}")),
            );
        }

        let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
        for s in 1..=4 {
            for sigma in Permutation::all(s) {
                let u = permutation_matrix(&sigma)?;
                let label = u.to_text();
                self.orthogonal_block(&u, &label, &mut rng, &mut tally, &mut next)?;
            }
        }

        Ok(tally.finish(
            Claim::Identities,
            params([
                ("max_b", max_b.to_string()),
                ("max_n", max_n.to_string()),
                ("lower_triangle_max_b", lower_max_b.to_string()),
                ("orthogonal_max_s", "4".into()),
                ("orthogonal_max_lower", "4".into()),
                ("orthogonal_max_n", "16".into()),
                ("seed", self.seed.to_string()),
            ]),
            start,
        ))
    }

    fn orthogonal_block(
        &self,
        u: &BitMatrix,
        label: &str,
        rng: &mut ChaCha8Rng,
        tally: &mut Tally,
        next: &mut impl FnMut() -> u64,
    ) -> Result<()> {
        let s = u.size();
        let un = Dense::from_bits(u);

        // ‖U‖ = s
        let norm_u = u.ones() as usize;
        tally.record(
            next(),
            || format!("‖U‖, U = {label}"),
            (norm_u != s).then(|| format!("{norm_u} != {s}")),
        );

        // ‖VU‖ = ‖V‖ for nonnegative k x s matrices V
        for k in 1..=4 {
            for _ in 0..8 {
                let v = Dense::random(k, s, 5, rng);
                let (lhs, rhs) = (v.mul(&un).sum(), v.sum());
                tally.record(
                    next(),
                    || format!("‖VU‖, U = {label}, V = {v}"),
                    (lhs != rhs).then(|| format!("{lhs} != {rhs}")),
                );
            }
        }

        // (B1)U = B1 and the block power formula, for all {0,1} blocks B up to 2 x 2
        for k in 1..=2usize {
            for bits in 0u64..1 << (k * k) {
                let rows: Vec<u64> = (0..k).map(|i| bits >> (i * k) & ((1 << k) - 1)).collect();
                let lower = BitMatrix::block(k, rows)?;
                let bd = Dense::from_bits(&lower);
                let ones = Dense::filled(k, s, 1);
                let b1 = bd.mul(&ones);
                let fixed = b1.mul(&un) == b1;
                tally.record(
                    next(),
                    || format!("(B1)U = B1, U = {label}, B = {}", lower.to_text()),
                    (!fixed).then(|| "differs".into()),
                );

                let whole = block_compose(u, &lower)?;
                let mut acc = whole.to_nat();
                let mut u_pow = un.clone();
                let mut b_pow = bd.clone();
                let mut geometric = ones.clone();
                for n in 1..=6 {
                    if n > 1 {
                        acc = acc.mul_bits(&whole);
                        u_pow = u_pow.mul(&un);
                        geometric = geometric.add(&b_pow.mul(&ones));
                        b_pow = b_pow.mul(&bd);
                    }
                    let want = Dense::assemble(&u_pow, &geometric, &b_pow);
                    let ok = Dense::from_nat(&acc) == want;
                    tally.record(
                        next(),
                        || format!("block power n = {n}, U = {label}, B = {}", lower.to_text()),
                        (!ok).then(|| "power differs from the block formula".into()),
                    );
                }
            }
        }

        // ‖[[U,0],[1,L_{b-s}]]^n‖ = s 2^(b-s) for b - s <= n
        for lower_side in 0..=4usize {
            let lower = if lower_side == 0 { BitMatrix::empty() } else { make_l(lower_side)? };
            let m = block_compose(u, &lower)?;
            let seq = norm_sequence(&m, 16);
            let want = BigUint::from(s) * pow2(lower_side);
            for n in lower_side.max(1)..=16 {
                let got = &seq[n - 1];
                tally.record(
                    next(),
                    || format!("orthogonal block U = {label}, b - s = {lower_side}, n = {n}"),
                    (*got != want).then(|| format!("{got} != {want}")),
                );
            }
        }
        Ok(())
    }

    /// `(M^n)_ij` equals the number of admissible words of length `n + 1`
    /// from `i` to `j`: exhaustively for sides up to `max_b`, then on random
    /// matrices with sides up to 5.
    pub fn word_norm_bridge(&self, max_b: usize, max_n: usize) -> Result<VerificationReport> {
        if !(2..=4).contains(&max_b) {
            return Err(Error::OutOfRange { value: max_b, expected: "exhaustive side 2..=4" });
        }
        let start = Instant::now();
        let check = |m: &BitMatrix| -> Option<String> {
            let mut acc = m.to_nat();
            for n in 1..=max_n {
                if n > 1 {
                    acc = acc.mul_bits(m);
                }
                let words = match admissible_words(m, n + 1) {
                    Ok(w) => w,
                    Err(e) => return Some(format!("enumeration failed: {e}")),
                };
                if BigUint::from(words.len()) != acc.norm() {
                    return Some(format!("n = {n}: ‖M^n‖ = {}, words {}", acc.norm(), words.len()));
                }
                let b = m.size();
                let mut counts = vec![0u64; b * b];
                for w in &words {
                    counts[(w.head()? - 1) * b + w.tail()? - 1] += 1;
                }
                for i in 1..=b {
                    for j in 1..=b {
                        let want = BigUint::from(counts[(i - 1) * b + j - 1]);
                        if *acc.get(i, j) != want {
                            return Some(format!("n = {n}: (M^n)_{i}{j} = {}, words {want}", acc.get(i, j)));
                        }
                    }
                }
            }
            None
        };
        let mut tally = Tally::default();
        for b in 2..=max_b {
            let t = self.sweep(b, Filter::All, check)?;
            let offset = (b as u64) << 40;
            tally = tally.merge(Tally {
                population: t.population,
                failures: t.failures.into_iter().map(|(k, c)| (offset + k, c)).collect(),
            });
        }
        let samples = random_matrices(self.seed, self.random_samples, 5);
        let sampled: Vec<(u64, Option<String>)> = if self.parallel {
            samples.par_iter().map(check).enumerate().map(|(k, r)| (k as u64, r)).collect()
        } else {
            samples.iter().map(check).enumerate().map(|(k, r)| (k as u64, r)).collect()
        };
        for (k, outcome) in sampled {
            tally.record((6u64 << 40) + k, || samples[k as usize].to_text(), outcome);
        }
        Ok(tally.finish(
            Claim::WordNormBridge,
            params([
                ("max_b", max_b.to_string()),
                ("max_n", max_n.to_string()),
                ("random_samples", self.random_samples.to_string()),
                ("random_max_b", "5".into()),
                ("seed", self.seed.to_string()),
            ]),
            start,
        ))
    }

    /// No cycles iff `M^b = 0` iff strictly lower triangular after some
    /// relabeling; the relabeling is applied and checked.
    pub fn nilpotency(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let tally = self.sweep(b, Filter::All, |m| {
            let no_cycles = cycle_structure(m).d_set.is_empty();
            let vanishes = power(m, b).ok()?.is_zero();
            let witness = is_strictly_lower_triangularizable(m);
            if let Some(p) = &witness {
                match apply_permutation(m, p) {
                    Ok(t) if is_strictly_lower_triangular(&t) => {}
                    _ => return Some(format!("witness {:?} does not triangularize", p.images())),
                }
            }
            let flags = [no_cycles, vanishes, witness.is_some(), digraph::is_nilpotent(m)];
            (flags.iter().any(|&f| f != flags[0])).then(|| {
                format!(
                    "acyclic {}, M^b = 0 {}, triangularizable {}, is_nilpotent {}",
                    flags[0], flags[1], flags[2], flags[3]
                )
            })
        })?;
        Ok(tally.finish(Claim::Nilpotency, params([("b", b.to_string()), ("filter", "all".into())]), start))
    }

    /// Structural P2 against `(M^k)_ii <= 1` for `k <= 2b^2`.
    pub fn p2_dual(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let max_k = 2 * b * b;
        let tally = self.sweep(b, Filter::All, |m| {
            let (s, p) = (satisfies_p2(m), p2_power_oracle(m, max_k));
            (s != p).then(|| format!("structural {s}, power oracle {p}"))
        })?;
        Ok(tally.finish(
            Claim::P2Dual,
            params([("b", b.to_string()), ("filter", "all".into()), ("max_k", max_k.to_string())]),
            start,
        ))
    }

    /// Under P1, the first `n` with `‖M^(n+1)‖ = ‖M^n‖` is followed by a
    /// constant run through `n + b + 4`; such an `n` exists exactly for the
    /// bounded class.
    pub fn stabilization(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let search = 4 * b + 8;
        let tally = self.sweep(b, Filter::P1, |m| {
            let seq = norm_sequence(m, search + b + 5);
            let first = (1..=search).find(|&n| seq[n] == seq[n - 1]);
            if let Some(n) = first {
                if let Some(k) = (n..=n + b + 4).find(|&k| seq[k - 1] != seq[n - 1]) {
                    return Some(format!(
                        "‖M^{n}‖ = ‖M^{}‖ = {}, but ‖M^{k}‖ = {}",
                        n + 1,
                        seq[n - 1],
                        seq[k - 1]
                    ));
                }
            }
            match classifier::classify(m) {
                Ok(c) if c.is_bounded() == first.is_some() => None,
                Ok(c) => Some(format!("class {}, first repeat {first:?}", c.label())),
                Err(e) => Some(format!("classify failed: {e}")),
            }
        })?;
        Ok(tally.finish(
            Claim::Stabilization,
            params([("b", b.to_string()), ("filter", "p1".into()), ("search", search.to_string())]),
            start,
        ))
    }

    /// The infinite-word census against norm growth: finite censuses have
    /// as many words as the stabilized norm, countable ones sit on an
    /// unbounded norm sequence.
    pub fn census(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let horizon = 4 * b + 8;
        let cap = pow2(b - 1);
        let tally = self.sweep(b, Filter::P1, |m| {
            let census = match infinite_word_census(m) {
                Ok(c) => c,
                Err(e) => return Some(format!("census failed: {e}")),
            };
            let seq = norm_sequence(m, horizon);
            let (last, before) = (&seq[horizon - 1], &seq[horizon - 2]);
            let p2 = satisfies_p2(m);
            match census {
                InfiniteCensus::PositiveDimension => (p2).then(|| "positive dimension, but P2 holds".into()),
                InfiniteCensus::CountablyInfinite => (!p2 || *last <= cap)
                    .then(|| format!("countable census, P2 {p2}, ‖M^{horizon}‖ = {last}")),
                InfiniteCensus::Finite(words) => {
                    let distinct: BTreeSet<_> = words.iter().collect();
                    if distinct.len() != words.len() || words.iter().any(|w| !w.is_admissible(m)) {
                        return Some("census words repeat or are inadmissible".into());
                    }
                    let count = BigUint::from(words.len());
                    (last != before || count != *last)
                        .then(|| format!("{} words, norms ... {before}, {last}", words.len()))
                }
            }
        })?;
        Ok(tally.finish(
            Claim::Census,
            params([("b", b.to_string()), ("filter", "p1".into()), ("horizon", horizon.to_string())]),
            start,
        ))
    }

    /// Cycle vertices against diagonal entries of powers, and every
    /// reported cycle word against the matrix.
    pub fn cycle_structure(&self, b: usize) -> Result<VerificationReport> {
        self.exhaustive_side(b)?;
        let start = Instant::now();
        let tally = self.sweep(b, Filter::All, |m| {
            let cs = cycle_structure(m);
            let mut on_cycle = BTreeSet::new();
            let mut acc = m.to_nat();
            for k in 1..=b {
                if k > 1 {
                    acc = acc.mul_bits(m);
                }
                on_cycle.extend((1..=b).filter(|&i| !acc.get(i, i).is_zero()));
            }
            let d: Vec<usize> = on_cycle.into_iter().collect();
            if d != cs.d_set {
                return Some(format!("cycle vertices {:?}, from powers {d:?}", cs.d_set));
            }
            match cs.cycles() {
                Err(_) => satisfies_p2(m).then(|| "P2 holds but no cycles reported".into()),
                Ok(cycles) => {
                    if cycles.keys().copied().collect::<Vec<_>>() != cs.d_set {
                        return Some("cycle map keys differ from the cycle vertices".into());
                    }
                    cycles.iter().find_map(|(&v, c)| {
                        let w = &c.word;
                        let mut closed = w.clone();
                        closed.push(w[0]);
                        let mut sorted = w.clone();
                        sorted.sort_unstable();
                        let ok = w[0] == v
                            && Word(closed).is_admissible(m)
                            && sorted == c.vertices
                            && sorted.windows(2).all(|p| p[0] < p[1]);
                        (!ok).then(|| format!("cycle of {v}: word {w:?}, vertices {:?}", c.vertices))
                    })
                }
            }
        })?;
        Ok(tally.finish(
            Claim::CycleStructure,
            params([("b", b.to_string()), ("filter", "all".into())]),
            start,
        ))
    }
}

fn permutation_matrix(sigma: &Permutation) -> Result<BitMatrix> {
    BitMatrix::from_fn(sigma.size(), |i, j| sigma.image(i) == j)
}

/// Nonzero matrices with sides drawn from `2..=max_b` and a per-matrix
/// density, reproducible from `seed`.
pub fn random_matrices(seed: u64, count: usize, max_b: usize) -> Vec<BitMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let b = rng.gen_range(2..=max_b);
        let density: f64 = rng.gen_range(0.15..0.65);
        let rows =
            (0..b).map(|_| (0..b).filter(|_| rng.gen_bool(density)).fold(0u64, |r, j| r | 1 << j)).collect();
        if let Ok(m) = BitMatrix::new(b, rows) {
            out.push(m);
        }
    }
    out
}

/// Small rectangular matrix over `u64`, for the block identities.
#[derive(Debug, Clone, PartialEq, Eq)]
struct Dense {
    rows: usize,
    cols: usize,
    data: Vec<u64>,
}

impl Dense {
    fn filled(rows: usize, cols: usize, v: u64) -> Self {
        Dense { rows, cols, data: vec![v; rows * cols] }
    }

    fn random(rows: usize, cols: usize, max: u64, rng: &mut ChaCha8Rng) -> Self {
        Dense { rows, cols, data: (0..rows * cols).map(|_| rng.gen_range(0..=max)).collect() }
    }

    fn from_bits(m: &BitMatrix) -> Self {
        let b = m.size();
        Dense { rows: b, cols: b, data: (0..b * b).map(|k| m.get(k / b + 1, k % b + 1) as u64).collect() }
    }

    fn from_nat(m: &NatMatrix) -> Self {
        let b = m.size();
        let data =
            (0..b * b).map(|k| u64::try_from(m.get(k / b + 1, k % b + 1)).expect("small entries")).collect();
        Dense { rows: b, cols: b, data }
    }

    fn at(&self, i: usize, j: usize) -> u64 {
        self.data[i * self.cols + j]
    }

    fn sum(&self) -> u64 {
        self.data.iter().sum()
    }

    fn mul(&self, rhs: &Dense) -> Dense {
        assert_eq!(self.cols, rhs.rows);
        let mut data = vec![0; self.rows * rhs.cols];
        for i in 0..self.rows {
            for l in 0..self.cols {
                for j in 0..rhs.cols {
                    data[i * rhs.cols + j] += self.at(i, l) * rhs.at(l, j);
                }
            }
        }
        Dense { rows: self.rows, cols: rhs.cols, data }
    }

    fn add(&self, rhs: &Dense) -> Dense {
        let data = self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect();
        Dense { rows: self.rows, cols: self.cols, data }
    }

    /// `[[top, 0], [left, corner]]`.
    fn assemble(top: &Dense, left: &Dense, corner: &Dense) -> Dense {
        let (s, k) = (top.rows, corner.rows);
        let n = s + k;
        let mut out = Dense::filled(n, n, 0);
        for i in 0..n {
            for j in 0..n {
                out.data[i * n + j] = match (i < s, j < s) {
                    (true, true) => top.at(i, j),
                    (true, false) => 0,
                    (false, true) => left.at(i - s, j),
                    (false, false) => corner.at(i - s, j - s),
                };
            }
        }
        out
    }
}

impl fmt::Display for Dense {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.at(i, j).to_string()).collect::<Vec<_>>().join(","))
            .collect();
        write!(f, "[{}]", rows.join(";"))
    }
}

pub fn verify_trichotomy(b: usize, horizon: usize) -> Result<VerificationReport> {
    Harness::default().trichotomy(b, horizon)
}

pub fn verify_sup_extremal(b: usize) -> Result<VerificationReport> {
    Harness::default().sup_extremal(b)
}

pub fn verify_binomial_extremal(b: usize, horizon: usize) -> Result<VerificationReport> {
    Harness::default().binomial_extremal(b, horizon)
}

pub fn verify_identities(max_b: usize, max_n: usize) -> Result<VerificationReport> {
    Harness::default().identities(max_b, max_n)
}

pub fn verify_word_norm_bridge(max_b: usize, max_n: usize) -> Result<VerificationReport> {
    Harness::default().word_norm_bridge(max_b, max_n)
}

pub fn verify_nilpotency(b: usize) -> Result<VerificationReport> {
    Harness::default().nilpotency(b)
}
