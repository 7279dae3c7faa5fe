//! Command-line front end. Results go to standard output as compact JSON,
//! errors to standard error as `{"error": kind, "message": text}`.
//!
//! Exit codes: 0 success, 1 internal failure or failing corpus run, 2 parse
//! or usage error, 3 target outside the image class, 4 budget or cap errors.

use std::io::Write;

use clap::{Parser, Subcommand};
use serde::Serialize;

use crate::classify::{classify_capped, ClassifyError, ARITY_CAP_ENV, DEFAULT_ARITY_CAP};
use crate::corpus::{entries, run_corpus};
use crate::homogeneous::{eigenvalues, phi, sample_image, Complex, ComplexMatrix2, EigenPair, DEFAULT_BOUND};
use crate::ncpoly::{infer_weights, parse, PolyError, Polynomial};
use crate::quaternion::Quaternion;
use crate::witness::{witness, WitnessError};
use crate::QuatError;

#[derive(Parser, Debug)]
#[command(name = "quatimage", version, about = "Images of non-commutative polynomials on the quaternions")]
struct Cli {
    /// Largest arity the multilinear classifier accepts (overrides QUATIMAGE_ARITY_CAP).
    #[arg(long, global = true)]
    arity_cap: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Classify the image of a multilinear polynomial.
    Classify {
        #[arg(short, long)]
        poly: String,
    },
    /// Find an input tuple on which the polynomial takes the target value.
    Witness {
        #[arg(short, long)]
        poly: String,
        /// Target quaternion, e.g. "3+4i-1/2k".
        #[arg(short, long, allow_hyphen_values = true)]
        target: String,
    },
    /// Classify the image by seeded exact sampling.
    Sample {
        #[arg(short, long)]
        poly: String,
        #[arg(short, long, default_value_t = 1000, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_BOUND)]
        bound: u32,
    },
    /// Integer weights certifying semihomogeneity.
    Weights {
        #[arg(short, long)]
        poly: String,
    },
    /// List the builtin corpus, or check it with --run.
    Corpus {
        #[arg(long)]
        run: bool,
    },
    /// The 2x2 complex matrix of z·q.
    Phi {
        #[arg(short, long, allow_hyphen_values = true)]
        q: String,
        /// Complex scalar "a+bi".
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        z: String,
    },
}

#[derive(Debug)]
struct Failure {
    code: i32,
    kind: &'static str,
    message: String,
}

impl Failure {
    fn new(code: i32, kind: &'static str, message: impl ToString) -> Self {
        Failure { code, kind, message: message.to_string() }
    }
}

impl From<PolyError> for Failure {
    fn from(e: PolyError) -> Self {
        match e {
            PolyError::ExpansionTooLarge { .. } => Failure::new(4, "expansion_too_large", e),
            PolyError::CapExceeded { .. } => Failure::new(4, "cap_exceeded", e),
            _ => Failure::new(2, "parse_error", e),
        }
    }
}

impl From<ClassifyError> for Failure {
    fn from(e: ClassifyError) -> Self {
        match e {
            ClassifyError::ArityCapExceeded { .. } => Failure::new(4, "arity_cap_exceeded", e),
            ClassifyError::NotMultilinear => Failure::new(2, "not_multilinear", e),
            ClassifyError::TupleLength { .. } => Failure::new(2, "usage_error", e),
        }
    }
}

impl From<WitnessError> for Failure {
    fn from(e: WitnessError) -> Self {
        match e {
            WitnessError::ClassMismatch { .. } => Failure::new(3, "class_mismatch", e),
            WitnessError::SearchBudgetExceeded { .. } => Failure::new(4, "search_budget_exceeded", e),
            WitnessError::Poly(p) => p.into(),
            _ => Failure::new(1, "internal_error", e),
        }
    }
}

impl From<QuatError> for Failure {
    fn from(e: QuatError) -> Self {
        match e {
            QuatError::Parse(_) => Failure::new(2, "parse_error", e),
            _ => Failure::new(1, "internal_error", e),
        }
    }
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    error: &'a str,
    message: &'a str,
}

#[derive(Serialize)]
struct PhiOutput {
    matrix: ComplexMatrix2,
    trace: Complex,
    det: Complex,
    eigen: EigenPair,
}

#[derive(Serialize)]
struct CorpusRun {
    passed: bool,
    outcomes: Vec<crate::corpus::CorpusOutcome>,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = write!(out, "{e}");
                return 0;
            }
            let text = e.to_string();
            let msg = text.lines().next().unwrap_or("usage error").trim_start_matches("error: ");
            report(err, &Failure::new(2, "usage_error", msg));
            return 2;
        }
    };
    match dispatch(cli) {
        Ok((json, code)) => {
            let _ = writeln!(out, "{json}");
            code
        }
        Err(f) => {
            report(err, &f);
            f.code
        }
    }
}

fn report(err: &mut dyn Write, f: &Failure) {
    let body = ErrorBody { error: f.kind, message: &f.message };
    let _ = writeln!(err, "{}", serde_json::to_string(&body).expect("error body serializes"));
}

fn to_json<T: Serialize>(v: &T) -> Result<String, Failure> {
    serde_json::to_string(v).map_err(|e| Failure::new(1, "internal_error", e))
}

fn arity_cap(flag: Option<usize>) -> Result<usize, Failure> {
    if let Some(cap) = flag {
        return Ok(cap);
    }
    match std::env::var(ARITY_CAP_ENV) {
        Ok(v) => v.trim().parse().map_err(|_| {
            Failure::new(2, "usage_error", format!("{ARITY_CAP_ENV} must be a nonnegative integer, got '{v}'"))
        }),
        Err(_) => Ok(DEFAULT_ARITY_CAP),
    }
}

fn parse_poly(text: &str) -> Result<Polynomial, Failure> {
    Ok(parse(text)?)
}

fn parse_quat(text: &str) -> Result<Quaternion, Failure> {
    Ok(text.parse::<Quaternion>()?)
}

fn dispatch(cli: Cli) -> Result<(String, i32), Failure> {
    match cli.command {
        Command::Classify { poly } => {
            let p = parse_poly(&poly)?;
            let ml = classify_capped(&p, arity_cap(cli.arity_cap)?)?;
            Ok((to_json(&ml)?, 0))
        }
        Command::Witness { poly, target } => {
            let p = parse_poly(&poly)?;
            let t = parse_quat(&target)?;
            let ml = classify_capped(&p, arity_cap(cli.arity_cap)?)?;
            let w = witness(&p, &ml, &t)?;
            let code = if w.verified { 0 } else { 1 };
            Ok((to_json(&w)?, code))
        }
        Command::Sample { poly, n, seed, bound } => {
            let p = parse_poly(&poly)?;
            Ok((to_json(&sample_image(&p, n as usize, seed, bound))?, 0))
        }
        Command::Weights { poly } => {
            let p = parse_poly(&poly)?;
            Ok((to_json(&infer_weights(&p)?)?, 0))
        }
        Command::Corpus { run: false } => Ok((to_json(&entries())?, 0)),
        Command::Corpus { run: true } => {
            let outcomes = run_corpus();
            let passed = outcomes.iter().all(|o| o.passed);
            Ok((to_json(&CorpusRun { passed, outcomes })?, if passed { 0 } else { 1 }))
        }
        Command::Phi { q, z } => {
            let q = parse_quat(&q)?;
            let zq = parse_quat(&z)?;
            if !zq.j.is_zero() || !zq.k.is_zero() {
                return Err(Failure::new(2, "parse_error", format!("complex scalar expected, got '{z}'")));
            }
            let matrix = phi(&q, &Complex::new(zq.re, zq.i));
            let output = PhiOutput { trace: matrix.trace(), det: matrix.det(), matrix, eigen: eigenvalues(&q) };
            Ok((to_json(&output)?, 0))
        }
    }
}
