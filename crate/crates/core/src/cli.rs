//! Command-line front end.
//!
//! Results go to `out`, diagnostics to `err`. Exit codes: 0 success,
//! 1 parse or usage error, 2 violated precondition, 3 counterexample found.

use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::classifier::{analyze, dimension, GrowthClass};
use crate::equivalence::{canonical_form, equivalence_witness};
use crate::error::Error;
use crate::json::big_strings;
use crate::matrix::{norm_sequence, BitMatrix};
use crate::symbolic::{
    admissible_words_between, admissible_words_capped, infinite_word_census, InfiniteCensus,
};
use crate::verify::{enumerate_matrices, Claim, Filter, Harness, VerificationReport};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PRECONDITION: i32 = 2;
pub const EXIT_COUNTEREXAMPLE: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "normgrowth", version, about = "Norm growth of powers of {0,1}-matrices")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

/// A matrix given inline ("110;010;001") or read from a file with one row
/// per line.
#[derive(Debug, Args)]
struct MatrixArg {
    matrix: Option<String>,
    #[arg(long, conflicts_with = "matrix")]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Growth class with certificate, sup norm when bounded, dimension.
    Classify(MatrixArg),
    /// ‖M^1‖, ..., ‖M^n‖.
    Norms {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, default_value_t = 12)]
        n: usize,
    },
    /// Admissible words of a given length.
    Words {
        #[command(flatten)]
        m: MatrixArg,
        #[arg(long, default_value_t = 12)]
        length: usize,
        #[arg(long)]
        head: Option<usize>,
        #[arg(long)]
        tail: Option<usize>,
        /// Refuse to list more words than this.
        #[arg(long, default_value_t = crate::symbolic::DEFAULT_WORD_CAP)]
        cap: usize,
    },
    /// Census of admissible infinite words.
    Infinite(MatrixArg),
    /// Canonical representative of the similarity class, with witness.
    Canonical(MatrixArg),
    /// Whether two matrices are similar under a relabeling.
    Equiv {
        a: Option<String>,
        b: Option<String>,
        /// Read both matrices from files instead (give the flag twice).
        #[arg(long, num_args = 1)]
        file: Vec<PathBuf>,
    },
    /// Dimension of the infinite word space and spectral radius.
    Dim(MatrixArg),
    /// Exhaustive check of one claim, or all of them.
    Verify {
        /// Claim id, or "all".
        #[arg(long, default_value = "all")]
        claim: String,
        #[arg(long)]
        b: Option<usize>,
        #[arg(long)]
        horizon: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        /// Single-threaded sweep.
        #[arg(long)]
        serial: bool,
        /// Permit exhaustive sweeps at b = 5.
        #[arg(long)]
        allow_b5: bool,
    },
    /// Stream the enumeration, one matrix per line.
    Gen {
        #[arg(long)]
        b: usize,
        #[arg(long, default_value = "all")]
        filter: String,
    },
}

enum Failure {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

type Outcome = std::result::Result<i32, Failure>;

fn load(arg: &MatrixArg) -> std::result::Result<BitMatrix, Failure> {
    match (&arg.matrix, &arg.file) {
        (Some(text), None) => Ok(BitMatrix::parse(text)?),
        (None, Some(path)) => read_file(path),
        _ => Err(Failure::Usage("expected a matrix argument or --file".into())),
    }
}

fn read_file(path: &PathBuf) -> std::result::Result<BitMatrix, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(BitMatrix::parse(&text)?)
}

fn emit(out: &mut dyn Write, value: &Value) -> std::io::Result<()> {
    writeln!(out, "{}", serde_json::to_string_pretty(value).expect("json value"))
}

fn certificate_text(class: &GrowthClass) -> String {
    match class {
        GrowthClass::Exponential { vertex, exponent, diagonal } => {
            format!("(M^{exponent})_{vertex},{vertex} = {diagonal}")
        }
        GrowthClass::Polynomial { head, branch, words } => {
            format!("head {head}, branch {branch}, words {} {}", words[0], words[1])
        }
        GrowthClass::Bounded { stabilized_norm, census_size } => {
            format!("stabilized norm {stabilized_norm}, {census_size} infinite words")
        }
    }
}

fn classify_cmd(m: &BitMatrix, format: Format, out: &mut dyn Write) -> Outcome {
    let a = analyze(m)?;
    match format {
        Format::Json => emit(out, &serde_json::to_value(&a).expect("analysis serializes"))?,
        Format::Text => {
            writeln!(out, "class: {}", a.class.label())?;
            writeln!(out, "certificate: {}", certificate_text(&a.class))?;
            if let Some(s) = &a.sup_norm {
                writeln!(out, "sup_norm: {s}")?;
            }
            writeln!(out, "dimension: {}", a.dimension)?;
            writeln!(out, "spectral_radius: {}", a.spectral_radius)?;
        }
    }
    Ok(EXIT_OK)
}

fn words_cmd(
    m: &BitMatrix,
    length: usize,
    head: Option<usize>,
    tail: Option<usize>,
    cap: usize,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let b = m.size();
    for v in [head, tail].into_iter().flatten() {
        if !(1..=b).contains(&v) {
            return Err(Error::IndexOutOfRange { index: v, size: b }.into());
        }
    }
    let words = match (head, tail) {
        (Some(i), Some(j)) if length >= 2 => admissible_words_between(m, length, i, j)?,
        _ => admissible_words_capped(m, length, cap)?
            .into_iter()
            .filter(|w| head.is_none_or(|i| w.head() == Some(i)) && tail.is_none_or(|j| w.tail() == Some(j)))
            .collect(),
    };
    if words.len() > cap {
        return Err(Error::WordCap { count: words.len().to_string(), cap }.into());
    }
    let rendered: Vec<String> = words.iter().map(|w| w.render(b)).collect();
    match format {
        Format::Json => emit(
            out,
            &json!({
                "length": length.to_string(),
                "count": rendered.len().to_string(),
                "words": rendered,
            }),
        )?,
        Format::Text => {
            for w in &rendered {
                writeln!(out, "{w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn infinite_cmd(m: &BitMatrix, format: Format, out: &mut dyn Write) -> Outcome {
    let census = infinite_word_census(m)?;
    let b = m.size();
    let (count, words): (Option<String>, Vec<String>) = match &census {
        InfiniteCensus::Finite(ws) => (Some(ws.len().to_string()), ws.iter().map(|w| w.render(b)).collect()),
        _ => (None, Vec::new()),
    };
    match format {
        Format::Json => emit(out, &json!({ "census": census.label(), "count": count, "words": words }))?,
        Format::Text => {
            match &count {
                Some(c) => writeln!(out, "{} {c}", census.label())?,
                None => writeln!(out, "{}", census.label())?,
            }
            for w in &words {
                writeln!(out, "{w}")?;
            }
        }
    }
    Ok(EXIT_OK)
}

fn canonical_cmd(m: &BitMatrix, format: Format, out: &mut dyn Write) -> Outcome {
    let c = canonical_form(m)?;
    let witness: Vec<String> = c.witness.images().iter().map(|i| i.to_string()).collect();
    match format {
        Format::Json => emit(out, &json!({ "matrix": c.matrix.to_text(), "witness": witness }))?,
        Format::Text => {
            writeln!(out, "{}", c.matrix.to_text())?;
            writeln!(out, "witness: {}", witness.join(" "))?;
        }
    }
    Ok(EXIT_OK)
}

fn equiv_cmd(a: &BitMatrix, b: &BitMatrix, format: Format, out: &mut dyn Write) -> Outcome {
    let w = equivalence_witness(a, b)?;
    let images = w.map(|p| p.images().iter().map(|i| i.to_string()).collect::<Vec<_>>());
    match format {
        Format::Json => emit(out, &json!({ "equivalent": images.is_some(), "witness": images }))?,
        Format::Text => match &images {
            Some(i) => writeln!(out, "true\nwitness: {}", i.join(" "))?,
            None => writeln!(out, "false")?,
        },
    }
    Ok(EXIT_OK)
}

fn dim_cmd(m: &BitMatrix, format: Format, out: &mut dyn Write) -> Outcome {
    let d = dimension(m);
    match format {
        Format::Json => emit(out, &serde_json::to_value(&d).expect("dimension serializes"))?,
        Format::Text => {
            writeln!(out, "dimension: {}", d.value)?;
            writeln!(out, "error_bound: {:e}", d.error_bound)?;
            writeln!(out, "spectral_radius: {}", d.spectral_radius.value)?;
            writeln!(out, "spectral_error_bound: {:e}", d.spectral_radius.error_bound)?;
            if d.empty_word_space {
                writeln!(out, "empty_word_space: true")?;
            }
        }
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    claim: &str,
    b: Option<usize>,
    horizon: Option<usize>,
    seed: Option<u64>,
    serial: bool,
    allow_b5: bool,
    format: Format,
    out: &mut dyn Write,
) -> Outcome {
    let claims: Vec<Claim> = if claim == "all" { Claim::ALL.to_vec() } else { vec![claim.parse()?] };
    let mut harness = Harness { parallel: !serial, allow_b5, ..Harness::default() };
    if let Some(s) = seed {
        harness.seed = s;
    }
    let reports = claims
        .iter()
        .map(|&c| harness.run(c, b, horizon))
        .collect::<crate::error::Result<Vec<VerificationReport>>>()?;
    match format {
        Format::Json if reports.len() == 1 => {
            emit(out, &serde_json::to_value(&reports[0]).expect("report serializes"))?
        }
        Format::Json => emit(out, &serde_json::to_value(&reports).expect("report serializes"))?,
        Format::Text => {
            for r in &reports {
                write!(out, "{}", r.to_text())?;
            }
        }
    }
    Ok(if reports.iter().all(VerificationReport::is_clean) { EXIT_OK } else { EXIT_COUNTEREXAMPLE })
}

fn gen_cmd(b: usize, filter: &str, out: &mut dyn Write) -> Outcome {
    let filter: Filter = filter.parse()?;
    let mut w = std::io::BufWriter::new(out);
    for m in enumerate_matrices(b, filter)? {
        writeln!(w, "{}", m.to_text())?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Outcome {
    let f = cli.format;
    match cli.command {
        Command::Classify(m) => classify_cmd(&load(&m)?, f, out),
        Command::Norms { m, n } => {
            let norms = big_strings(&norm_sequence(&load(&m)?, n));
            match f {
                Format::Json => emit(out, &json!({ "n": n.to_string(), "norms": norms }))?,
                Format::Text => writeln!(out, "{}", norms.join(" "))?,
            }
            Ok(EXIT_OK)
        }
        Command::Words { m, length, head, tail, cap } => {
            words_cmd(&load(&m)?, length, head, tail, cap, f, out)
        }
        Command::Infinite(m) => infinite_cmd(&load(&m)?, f, out),
        Command::Canonical(m) => canonical_cmd(&load(&m)?, f, out),
        Command::Equiv { a, b, file } => {
            let (x, y) = match (a, b, file.as_slice()) {
                (Some(a), Some(b), []) => (BitMatrix::parse(&a)?, BitMatrix::parse(&b)?),
                (None, None, [p, q]) => (read_file(p)?, read_file(q)?),
                _ => {
                    return Err(Failure::Usage("equiv needs two matrices, inline or via --file twice".into()))
                }
            };
            equiv_cmd(&x, &y, f, out)
        }
        Command::Dim(m) => dim_cmd(&load(&m)?, f, out),
        Command::Verify { claim, b, horizon, seed, serial, allow_b5 } => {
            verify_cmd(&claim, b, horizon, seed, serial, allow_b5, f, out)
        }
        Command::Gen { b, filter } => gen_cmd(b, &filter, out),
    }
}

/// Parses `argv` (program name first) and runs the subcommand.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    return EXIT_OK;
                }
                _ => EXIT_USAGE,
            };
            let _ = write!(err, "{e}");
            return code;
        }
    };
    match dispatch(cli, out) {
        Ok(code) => code,
        Err(Failure::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(Failure::Lib(e)) => {
            let _ = writeln!(err, "error: {e}");
            if e.is_precondition() {
                EXIT_PRECONDITION
            } else {
                EXIT_USAGE
            }
        }
        Err(Failure::Io(e)) if e.kind() == std::io::ErrorKind::BrokenPipe => EXIT_OK,
        Err(Failure::Io(e)) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_USAGE
        }
    }
}

/// Entry point for the binary.
pub fn main() -> i32 {
    let stdout = std::io::stdout();
    let stderr = std::io::stderr();
    run(std::env::args_os(), &mut stdout.lock(), &mut stderr.lock())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("normgrowth").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn norms_of_swap() {
        let (code, out, _) = run_str(&["norms", "01;10", "--n", "4"]);
        assert_eq!(code, 0);
        assert_eq!(out.trim(), "2 2 2 2");
    }

    #[test]
    fn classify_json() {
        let (code, out, _) = run_str(&["classify", "10;11", "--format", "json"]);
        assert_eq!(code, 0);
        let v: Value = serde_json::from_str(&out).unwrap();
        assert_eq!(v["class"], "polynomial");
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["classify", "01;00"]).0, EXIT_PRECONDITION);
        let (code, _, err) = run_str(&["classify", "01;00"]);
        assert_eq!(code, 2);
        assert!(err.contains("column 2"), "{err}");
        assert_eq!(run_str(&["classify", "012;1"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_str(&["--help"]).0, EXIT_OK);
    }
}
