//! Evidence for the image of semihomogeneous polynomials.
//!
//! The possible images are `{0}`, `ℝ`, `ℝ≥0`, `ℝ≤0`, `V` or a Zariski dense
//! subset of `ℍ`; there is no exact decision procedure for the last case, so
//! [`sample_image`] classifies seeded exact evaluations instead. This module
//! also carries the embedding `ℍ ⊗ ℂ → M₂(ℂ)` and the eigenvalue-ratio
//! factors used to build polynomials avoiding prescribed ratios.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ncpoly::{Polynomial, WeightVector};
use crate::quaternion::Quaternion;
use crate::random;
use crate::scalar::{fmt_rational, ExactScalar};

/// Default bound on sampled numerators and denominators.
pub const DEFAULT_BOUND: u32 = 100;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomogeneousError {
    #[error("ratio point (0, 0) does not name a point on the unit circle")]
    InvalidRatioPoint,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SampleVerdict {
    Zero,
    RAll,
    RNonneg,
    RNonpos,
    VOnly,
    DenseH,
}

impl SampleVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            SampleVerdict::Zero => "ZERO",
            SampleVerdict::RAll => "R_ALL",
            SampleVerdict::RNonneg => "R_NONNEG",
            SampleVerdict::RNonpos => "R_NONPOS",
            SampleVerdict::VOnly => "V_ONLY",
            SampleVerdict::DenseH => "DENSE_H",
        }
    }
}

impl fmt::Display for SampleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for SampleVerdict {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

/// Exact category of one sampled value.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ValueCategory {
    Zero,
    PositiveScalar,
    NegativeScalar,
    Vector,
    Mixed,
}

impl ValueCategory {
    pub fn of(q: &Quaternion) -> ValueCategory {
        match (q.is_scalar(), q.re.signum()) {
            (true, 0) => ValueCategory::Zero,
            (true, 1) => ValueCategory::PositiveScalar,
            (true, _) => ValueCategory::NegativeScalar,
            (false, 0) => ValueCategory::Vector,
            (false, _) => ValueCategory::Mixed,
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CategoryCounts {
    pub zero: usize,
    pub positive_scalar: usize,
    pub negative_scalar: usize,
    pub vector: usize,
    pub mixed: usize,
}

impl CategoryCounts {
    fn record(&mut self, c: ValueCategory) {
        match c {
            ValueCategory::Zero => self.zero += 1,
            ValueCategory::PositiveScalar => self.positive_scalar += 1,
            ValueCategory::NegativeScalar => self.negative_scalar += 1,
            ValueCategory::Vector => self.vector += 1,
            ValueCategory::Mixed => self.mixed += 1,
        }
    }

    pub fn total(&self) -> usize {
        self.zero + self.positive_scalar + self.negative_scalar + self.vector + self.mixed
    }
}

/// Signs of the real parts over all samples.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct RealPartSigns {
    pub positive: usize,
    pub zero: usize,
    pub negative: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SampleReport {
    pub verdict: SampleVerdict,
    pub n: usize,
    pub seed: u64,
    pub bound: u32,
    pub counts: CategoryCounts,
    pub real_parts: RealPartSigns,
    pub notes: Vec<String>,
}

/// Category of each of the `n` seeded samples; sample `i` draws its tuple
/// from [`random::substream`]`(seed, i)`.
pub fn sample_categories(p: &Polynomial, n: usize, seed: u64, bound: u32) -> Vec<ValueCategory> {
    sample_values(p, n, seed, bound).iter().map(ValueCategory::of).collect()
}

/// The exact sampled values, in sample order.
pub fn sample_values(p: &Polynomial, n: usize, seed: u64, bound: u32) -> Vec<Quaternion> {
    (0..n as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = random::substream(seed, i);
            let args = random::tuple(&mut rng, p.num_vars(), bound);
            p.evaluate(&args).expect("tuple sized to the polynomial")
        })
        .collect()
}

pub fn sample_image(p: &Polynomial, n: usize, seed: u64, bound: u32) -> SampleReport {
    let values = sample_values(p, n, seed, bound);
    let mut counts = CategoryCounts::default();
    let mut real_parts = RealPartSigns::default();
    for v in &values {
        counts.record(ValueCategory::of(v));
        match v.re.signum() {
            1 => real_parts.positive += 1,
            0 => real_parts.zero += 1,
            _ => real_parts.negative += 1,
        }
    }
    let verdict = decide(&counts);
    let mut notes = vec!["verdict is sampling evidence, not a proof".to_string()];
    match verdict {
        SampleVerdict::Zero => notes.push("every sampled value is 0".into()),
        SampleVerdict::RNonneg | SampleVerdict::RNonpos => {
            notes.push("signed verdicts require at least one nonzero sample; zeros are allowed".into())
        }
        SampleVerdict::DenseH => {
            notes.push("consistent with a Zariski dense image in H".into());
            if real_parts.positive == 0 {
                notes.push("all sampled real parts are <= 0".into());
            } else if real_parts.negative == 0 {
                notes.push("all sampled real parts are >= 0".into());
            }
            if counts.positive_scalar + counts.negative_scalar == 0 {
                notes.push("no nonzero scalar was sampled".into());
            }
        }
        _ => {}
    }
    SampleReport { verdict, n, seed, bound, counts, real_parts, notes }
}

fn decide(c: &CategoryCounts) -> SampleVerdict {
    let scalars = c.positive_scalar + c.negative_scalar;
    if scalars + c.vector + c.mixed == 0 {
        SampleVerdict::Zero
    } else if c.vector + c.mixed == 0 {
        match (c.positive_scalar > 0, c.negative_scalar > 0) {
            (true, true) => SampleVerdict::RAll,
            (true, false) => SampleVerdict::RNonneg,
            _ => SampleVerdict::RNonpos,
        }
    } else if scalars + c.mixed == 0 {
        SampleVerdict::VOnly
    } else {
        SampleVerdict::DenseH
    }
}

/// Checks `p(c^{w_1}x_1, …, c^{w_m}x_m) = c^d·p(x)` on seeded draws.
pub fn check_cone_identity(p: &Polynomial, w: &WeightVector, trials: usize, seed: u64) -> bool {
    if w.weights.len() != p.num_vars() {
        return false;
    }
    (0..trials as u64).all(|i| {
        let mut rng = random::substream(seed, i);
        let c = ExactScalar::from(random::nonzero_rational(&mut rng, 12));
        let args = random::tuple(&mut rng, p.num_vars(), 12);
        let scaled: Vec<Quaternion> =
            args.iter().zip(&w.weights).map(|(a, &wj)| a.scale(&c.powi(wj).expect("c is nonzero"))).collect();
        let lhs = p.evaluate(&scaled).expect("arity");
        let rhs = p.evaluate(&args).expect("arity").scale(&c.powi(w.degree).expect("c is nonzero"));
        lhs == rhs
    })
}

/// `re + im·i` over the exact reals.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Complex {
    pub re: ExactScalar,
    pub im: ExactScalar,
}

impl Complex {
    pub fn new(re: ExactScalar, im: ExactScalar) -> Self {
        Complex { re, im }
    }

    pub fn real(re: ExactScalar) -> Self {
        Complex::new(re, ExactScalar::zero())
    }

    pub fn zero() -> Self {
        Complex::real(ExactScalar::zero())
    }

    pub fn one() -> Self {
        Complex::real(ExactScalar::one())
    }

    pub fn conj(&self) -> Complex {
        Complex::new(self.re.clone(), -&self.im)
    }

    pub fn scale(&self, s: &ExactScalar) -> Complex {
        Complex::new(&self.re * s, &self.im * s)
    }
}

impl Add for &Complex {
    type Output = Complex;
    fn add(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re + &rhs.re, &self.im + &rhs.im)
    }
}

impl Sub for &Complex {
    type Output = Complex;
    fn sub(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re - &rhs.re, &self.im - &rhs.im)
    }
}

impl Mul for &Complex {
    type Output = Complex;
    fn mul(self, rhs: &Complex) -> Complex {
        Complex::new(&self.re * &rhs.re - &self.im * &rhs.im, &self.re * &rhs.im + &self.im * &rhs.re)
    }
}

impl Neg for &Complex {
    type Output = Complex;
    fn neg(self) -> Complex {
        Complex::new(-&self.re, -&self.im)
    }
}

/// Row-major `[[m00, m01], [m10, m11]]`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ComplexMatrix2 {
    pub entries: [[Complex; 2]; 2],
}

impl ComplexMatrix2 {
    pub fn new(m00: Complex, m01: Complex, m10: Complex, m11: Complex) -> Self {
        ComplexMatrix2 { entries: [[m00, m01], [m10, m11]] }
    }

    pub fn identity() -> Self {
        ComplexMatrix2::new(Complex::one(), Complex::zero(), Complex::zero(), Complex::one())
    }

    pub fn trace(&self) -> Complex {
        &self.entries[0][0] + &self.entries[1][1]
    }

    pub fn det(&self) -> Complex {
        let [[a, b], [c, d]] = &self.entries;
        &(a * d) - &(b * c)
    }

    pub fn add(&self, other: &ComplexMatrix2) -> ComplexMatrix2 {
        let e = |r: usize, c: usize| &self.entries[r][c] + &other.entries[r][c];
        ComplexMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }

    pub fn mul(&self, other: &ComplexMatrix2) -> ComplexMatrix2 {
        let e = |r: usize, c: usize| {
            &(&self.entries[r][0] * &other.entries[0][c]) + &(&self.entries[r][1] * &other.entries[1][c])
        };
        ComplexMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
    }
}

/// `z·[[a+bi, c+di], [-c+di, a-bi]]` for `q = a+bi+cj+dk`.
pub fn phi(q: &Quaternion, z: &Complex) -> ComplexMatrix2 {
    let (a, b, c, d) = (&q.re, &q.i, &q.j, &q.k);
    let m = ComplexMatrix2::new(
        Complex::new(a.clone(), b.clone()),
        Complex::new(c.clone(), d.clone()),
        Complex::new(-c, d.clone()),
        Complex::new(a.clone(), -b),
    );
    let e = |r: usize, col: usize| z * &m.entries[r][col];
    ComplexMatrix2::new(e(0, 0), e(0, 1), e(1, 0), e(1, 1))
}

/// Eigenvalues `alpha ± √n_sq·i` of `phi(q, 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenPair {
    pub alpha: ExactScalar,
    pub n_sq: ExactScalar,
}

impl EigenPair {
    /// Both eigenvalues as exact complex numbers (introduces `√n_sq`).
    pub fn values(&self) -> (Complex, Complex) {
        let n = self.n_sq.sqrt().expect("n_sq is a sum of squares");
        (Complex::new(self.alpha.clone(), n.clone()), Complex::new(self.alpha.clone(), -n))
    }
}

pub fn eigenvalues(q: &Quaternion) -> EigenPair {
    EigenPair { alpha: q.re_part(), n_sq: q.ve_part().norm_sq() }
}

/// Circle point `c = (a + b·i)/(a − b·i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatioPoint {
    pub a: BigRational,
    pub b: BigRational,
}

impl RatioPoint {
    pub fn new(a: BigRational, b: BigRational) -> Result<Self, HomogeneousError> {
        if a.is_zero() && b.is_zero() {
            return Err(HomogeneousError::InvalidRatioPoint);
        }
        Ok(RatioPoint { a, b })
    }

    pub fn from_ints(a: i64, b: i64) -> Result<Self, HomogeneousError> {
        RatioPoint::new(BigRational::from_integer(a.into()), BigRational::from_integer(b.into()))
    }
}

impl Serialize for RatioPoint {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("RatioPoint", 2)?;
        st.serialize_field("a", &fmt_rational(&self.a))?;
        st.serialize_field("b", &fmt_rational(&self.b))?;
        st.end()
    }
}

pub type RatioSet = Vec<RatioPoint>;

/// `−a²(λ₁−λ₂)² − b²(λ₁+λ₂)²`, computed as `4·(a²·n_sq − b²·alpha²)`.
///
/// Vanishes exactly when `λ₁/λ₂` is `c` or `1/c`.
pub fn ratio_factor(q: &Quaternion, c: &RatioPoint) -> Result<ExactScalar, HomogeneousError> {
    if c.a.is_zero() && c.b.is_zero() {
        return Err(HomogeneousError::InvalidRatioPoint);
    }
    let eig = eigenvalues(q);
    let a_sq = ExactScalar::from(&c.a * &c.a);
    let b_sq = ExactScalar::from(&c.b * &c.b);
    let inner = &a_sq * &eig.n_sq - &b_sq * &eig.alpha.square();
    Ok(inner * ExactScalar::from(4))
}

/// `q · Π_{c∈S} ratio_factor(q, c)`.
pub fn ratio_avoiding_eval(q: &Quaternion, set: &[RatioPoint]) -> Result<Quaternion, HomogeneousError> {
    let mut scale = ExactScalar::one();
    for c in set {
        scale = &scale * &ratio_factor(q, c)?;
    }
    Ok(q.scale(&scale))
}
