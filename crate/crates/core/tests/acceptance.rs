//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure.

use std::process::ExitCode;
use std::time::Instant;

use num_bigint::BigUint;

use normgrowth::classifier::{dimension, spectral_radius, GrowthClass};
use normgrowth::equivalence::{canonical_form, extremal_sup_forms};
use normgrowth::matrix::{binomial, make_t, power, BitMatrix};
use normgrowth::verify::{Harness, VerificationReport};
use normgrowth::Result;

type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn clean(reports: &[VerificationReport]) -> Outcome {
    let mut parts = Vec::new();
    for r in reports {
        if !r.is_clean() {
            return Err(r.to_text());
        }
        let b = r.parameters.get("b").or(r.parameters.get("max_b")).cloned().unwrap_or_default();
        parts.push(format!("b={b}: {}/{} in {} ms", r.passes, r.population, r.elapsed_ms));
    }
    Ok(parts.join(", "))
}

fn sweep(f: impl Fn(usize) -> Result<VerificationReport>) -> Outcome {
    let reports = (2..=4).map(f).collect::<Result<Vec<_>>>().map_err(|e| e.to_string())?;
    clean(&reports)
}

fn trichotomy() -> Outcome {
    let h = Harness::default();
    let summary = sweep(|b| h.trichotomy(b, 12))?;
    // A classifier that swaps bounded and polynomial must be caught.
    let corrupted = |m: &BitMatrix| -> Result<GrowthClass> {
        Ok(match normgrowth::classify(m)? {
            GrowthClass::Bounded { .. } => {
                let w = normgrowth::symbolic::InfiniteWordDescriptor::periodic(vec![1])?;
                GrowthClass::Polynomial { head: 1, branch: 1, words: [w.clone(), w] }
            }
            GrowthClass::Polynomial { .. } => {
                GrowthClass::Bounded { stabilized_norm: BigUint::from(1u32), census_size: 1 }
            }
            c => c,
        })
    };
    let r = h.trichotomy_with(3, 12, &corrupted).map_err(|e| e.to_string())?;
    if r.is_clean() {
        return Err("corrupted classifier went unnoticed".into());
    }
    Ok(format!("{summary}; corrupted classifier caught on {} matrices", r.counterexamples.len()))
}

fn sup_extremal() -> Outcome {
    let h = Harness::default();
    let summary = sweep(|b| h.sup_extremal(b))?;
    let expected: Vec<BitMatrix> = ["10;10", "10;01", "01;10"]
        .iter()
        .map(|s| canonical_form(&s.parse().unwrap()).unwrap().matrix)
        .collect();
    let forms: Vec<BitMatrix> =
        extremal_sup_forms(2).unwrap().iter().map(|f| canonical_form(f).unwrap().matrix).collect();
    if expected.iter().any(|e| !forms.contains(e)) {
        return Err(format!("b = 2 forms {forms:?}"));
    }
    Ok(summary)
}

fn binomial_extremal() -> Outcome {
    let h = Harness::default();
    sweep(|b| h.binomial_extremal(b, 12))
}

fn tb_binomial() -> Outcome {
    let start = Instant::now();
    let r = Harness::default().tb_binomial(8, 20).map_err(|e| e.to_string())?;
    let summary = clean(&[r])?;
    let direct = power(&make_t(8).unwrap(), 20).unwrap().norm();
    let want = BigUint::from(1_184_040u32);
    if binomial(28, 21) != want || direct != want {
        return Err(format!("C(28,21) = {}, ‖T_8^20‖ = {direct}", binomial(28, 21)));
    }
    Ok(format!("{summary}; ‖T_8^20‖ = 1184040; {} ms", start.elapsed().as_millis()))
}

fn word_norm_bridge() -> Outcome {
    let r = Harness::default().word_norm_bridge(3, 6).map_err(|e| e.to_string())?;
    if r.parameters["random_samples"] != "200" {
        return Err("random sample count changed".into());
    }
    clean(&[r])
}

fn infinite_word_extremal() -> Outcome {
    let h = Harness::default();
    sweep(|b| h.infinite_word_extremal(b))
}

fn identities() -> Outcome {
    clean(&[Harness::default().identities(10, 10).map_err(|e| e.to_string())?])
}

fn p2_dual() -> Outcome {
    let h = Harness::default();
    sweep(|b| h.p2_dual(b))
}

fn nilpotency() -> Outcome {
    let h = Harness::default();
    sweep(|b| h.nilpotency(b))
}

fn dimension_spot_checks() -> Outcome {
    let golden = dimension(&"11;10".parse().unwrap());
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let want = phi.ln() / 2f64.ln();
    let rho = spectral_radius(&"11;10".parse().unwrap());
    if (golden.value - want).abs() > 1e-9 || rho.error_bound > 1e-12 {
        return Err(format!("golden mean {} vs {want}, radius bound {}", golden.value, rho.error_bound));
    }
    for b in 2..=8 {
        let t = dimension(&make_t(b).unwrap()).value;
        let ones = BitMatrix::from_fn(b, |_, _| true).unwrap();
        let full = dimension(&ones).value;
        if t != 0.0 || full != 1.0 {
            return Err(format!("b = {b}: dim T_b = {t}, dim all-ones = {full}"));
        }
    }
    Ok(format!("golden mean {:.12} (|error| {:.1e})", golden.value, (golden.value - want).abs()))
}

fn stabilization() -> Outcome {
    let h = Harness::default();
    sweep(|b| h.stabilization(b))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("trichotomy, exhaustive b = 2..4", trichotomy),
        ("supremum 2^(b-1) attained on exactly three classes", sup_extremal),
        ("binomial equality exactly on the class of T_b", binomial_extremal),
        ("‖T_b^n‖ = C(n+b, n+1) for b <= 8, n <= 20", tb_binomial),
        ("word-norm bridge", word_norm_bridge),
        ("infinite word count 2^(b-1) iff extremal", infinite_word_extremal),
        ("binomial, lower-triangle and orthogonal-block identities", identities),
        ("P2 structural vs power oracle", p2_dual),
        ("nilpotency three-way equivalence", nilpotency),
        ("dimension spot checks", dimension_spot_checks),
        ("norm stabilization after first repeat", stabilization),
    ];
    let mut failed = 0;
    for (k, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS [{:>2}] {name} ({secs:.2} s): {detail}", k + 1),
            Err(detail) => {
                failed += 1;
                println!("FAIL [{:>2}] {name} ({secs:.2} s): {detail}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
