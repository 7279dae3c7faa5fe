//! Builtin golden corpus of polynomials with known images.

use serde::Serialize;

use crate::classify::{classify, ImageClass};
use crate::homogeneous::{ratio_avoiding_eval, ratio_factor, sample_image, RatioPoint, SampleVerdict};
use crate::ncpoly::parse;
use crate::random;

pub const CORPUS_SAMPLES: usize = 1000;
pub const CORPUS_SEED: u64 = 42;
pub const CORPUS_BOUND: u32 = 100;
const RATIO_TRIALS: u64 = 200;

/// What an entry is expected to satisfy.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Expectation {
    /// Exact multilinear classification.
    Class { class: ImageClass },
    /// Sampler verdict, optionally with every real part `≤ 0` or no nonzero scalar.
    Sample { verdict: SampleVerdict, real_parts_nonpositive: bool, no_nonzero_scalars: bool },
    /// Outputs of the ratio-avoiding map are zero or avoid each listed ratio.
    RatioAvoiding { sets: Vec<Vec<RatioPoint>> },
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusEntry {
    pub name: &'static str,
    pub polynomial: &'static str,
    pub expected: Expectation,
    pub note: &'static str,
}

#[derive(Clone, Debug, Serialize)]
pub struct CorpusOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub observed: String,
}

fn sample(verdict: SampleVerdict) -> Expectation {
    Expectation::Sample { verdict, real_parts_nonpositive: false, no_nonzero_scalars: false }
}

fn point(a: i64, b: i64) -> RatioPoint {
    RatioPoint::from_ints(a, b).expect("nonzero point")
}

pub fn entries() -> Vec<CorpusEntry> {
    vec![
        CorpusEntry {
            name: "i",
            polynomial: "s4",
            expected: Expectation::Class { class: ImageClass::ZeroPi },
            note: "standard polynomial of degree 4 is an identity on quaternions",
        },
        CorpusEntry {
            name: "ii",
            polynomial: "[x1,x2]",
            expected: Expectation::Class { class: ImageClass::VectorsV },
            note: "Lie bracket takes every pure vector",
        },
        CorpusEntry {
            name: "iii",
            polynomial: "[x1,x2][x3,x4]+[x3,x4][x1,x2]",
            expected: Expectation::Class { class: ImageClass::ScalarsR },
            note: "anticommutator of brackets is a multilinear central polynomial",
        },
        CorpusEntry {
            name: "iv",
            polynomial: "x1",
            expected: sample(SampleVerdict::DenseH),
            note: "identity polynomial takes every quaternion",
        },
        CorpusEntry {
            name: "v",
            polynomial: "[x1,x2]^2",
            expected: sample(SampleVerdict::RNonpos),
            note: "square of a vector is minus its norm",
        },
        CorpusEntry {
            name: "v-neg",
            polynomial: "-[x1,x2]^2",
            expected: sample(SampleVerdict::RNonneg),
            note: "negated bracket square takes nonnegative scalars",
        },
        CorpusEntry {
            name: "vi",
            polynomial: "[x1,x2]^2+[x1^2,x2^2]",
            expected: Expectation::Sample {
                verdict: SampleVerdict::DenseH,
                real_parts_nonpositive: true,
                no_nonzero_scalars: false,
            },
            note: "image is the quaternions with nonpositive real part",
        },
        CorpusEntry {
            name: "vii",
            polynomial: "[x1,x2]^2 x1",
            expected: Expectation::Sample {
                verdict: SampleVerdict::DenseH,
                real_parts_nonpositive: false,
                no_nonzero_scalars: true,
            },
            note: "takes all values except nonzero scalars; not one of the clean image classes, scalars are excluded on samples only",
        },
        CorpusEntry {
            name: "viii",
            polynomial: "x1",
            expected: Expectation::RatioAvoiding {
                sets: vec![
                    vec![point(0, 1)],
                    vec![point(1, 1), point(1, -1)],
                    vec![point(0, 1), point(1, 2), point(3, -1)],
                ],
            },
            note: "x times ratio factors avoids the listed eigenvalue ratios",
        },
        CorpusEntry {
            name: "x1x2",
            polynomial: "x1*x2",
            expected: Expectation::Class { class: ImageClass::FullH },
            note: "plain product takes every quaternion",
        },
    ]
}

/// Multilinear entries, whose sampler verdict must match the classifier.
pub fn multilinear_entries() -> Vec<CorpusEntry> {
    entries()
        .into_iter()
        .filter(|e| parse(e.polynomial).is_ok_and(|p| p.is_multilinear()))
        .filter(|e| !matches!(e.expected, Expectation::RatioAvoiding { .. }))
        .collect()
}

/// Sampler verdict corresponding to a multilinear class.
pub fn sampler_counterpart(class: ImageClass) -> SampleVerdict {
    match class {
        ImageClass::ZeroPi => SampleVerdict::Zero,
        ImageClass::ScalarsR => SampleVerdict::RAll,
        ImageClass::VectorsV => SampleVerdict::VOnly,
        ImageClass::FullH => SampleVerdict::DenseH,
    }
}

pub fn run_entry(entry: &CorpusEntry) -> CorpusOutcome {
    let p = match parse(entry.polynomial) {
        Ok(p) => p,
        Err(e) => return CorpusOutcome { name: entry.name, passed: false, observed: e.to_string() },
    };
    let (passed, observed) = match &entry.expected {
        Expectation::Class { class } => match classify(&p) {
            Ok(ml) => (ml.verdict == *class, ml.verdict.to_string()),
            Err(e) => (false, e.to_string()),
        },
        Expectation::Sample { verdict, real_parts_nonpositive, no_nonzero_scalars } => {
            let r = sample_image(&p, CORPUS_SAMPLES, CORPUS_SEED, CORPUS_BOUND);
            let scalars = r.counts.positive_scalar + r.counts.negative_scalar;
            let ok = r.verdict == *verdict
                && (!real_parts_nonpositive || r.real_parts.positive == 0)
                && (!no_nonzero_scalars || scalars == 0);
            (ok, format!("{} ({} positive real parts, {} nonzero scalars)", r.verdict, r.real_parts.positive, scalars))
        }
        Expectation::RatioAvoiding { sets } => {
            let mut failures = 0usize;
            let mut zeros = 0usize;
            for (s_idx, set) in sets.iter().enumerate() {
                for i in 0..RATIO_TRIALS {
                    let mut rng = random::substream(CORPUS_SEED + s_idx as u64, i);
                    let q = random::quaternion(&mut rng, 10);
                    let out = p.evaluate(&[q]).ok().and_then(|x| ratio_avoiding_eval(&x, set).ok());
                    match out {
                        Some(o) if o.is_zero() => zeros += 1,
                        Some(o) if set.iter().all(|c| ratio_factor(&o, c).is_ok_and(|f| !f.is_zero())) => {}
                        _ => failures += 1,
                    }
                }
            }
            (failures == 0, format!("{failures} failures, {zeros} zero outputs"))
        }
    };
    CorpusOutcome { name: entry.name, passed, observed }
}

pub fn run_corpus() -> Vec<CorpusOutcome> {
    entries().iter().map(run_entry).collect()
}
