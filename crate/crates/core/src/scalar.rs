//! Exact real scalars: the rationals closed under square roots of
//! nonnegative elements.
//!
//! A scalar is either a rational or `a + b·√n`, where `a`, `b` and `n` only
//! involve radicals strictly below `√n` in a fixed total order (height first,
//! then structure of the radicand). Representations of dependent radicals
//! (say `√6` next to `√2·√3`) need not be unique, so every test here is
//! value-based: zero tests, signs and inverses recurse down the tower and
//! never consult a floating approximation.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};
use std::sync::Arc;

use num_bigint::{BigInt, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::QuatError;

/// Small primes used to pull square factors out of rational radicands.
const SQUARE_FACTOR_PRIMES: usize = 168;

#[derive(Clone, Debug)]
pub enum ExactScalar {
    Rational(BigRational),
    Ext(Arc<Ext>),
}

/// `a + b·√radicand`, with `b` nonzero.
#[derive(Debug)]
pub struct Ext {
    a: ExactScalar,
    b: ExactScalar,
    root: Radical,
}

/// A square root adjoined to the tower.
#[derive(Clone, Debug)]
pub struct Radical(Arc<RadicalInner>);

#[derive(Debug)]
struct RadicalInner {
    radicand: ExactScalar,
    height: u32,
}

impl Radical {
    fn new(radicand: ExactScalar) -> Self {
        let height = radicand.height() + 1;
        Radical(Arc::new(RadicalInner { radicand, height }))
    }

    pub fn radicand(&self) -> &ExactScalar {
        &self.0.radicand
    }

    pub fn height(&self) -> u32 {
        self.0.height
    }

    fn order(&self, other: &Radical) -> Ordering {
        if Arc::ptr_eq(&self.0, &other.0) {
            return Ordering::Equal;
        }
        self.height().cmp(&other.height()).then_with(|| self.radicand().structural_cmp(other.radicand()))
    }
}

impl Ext {
    pub fn a(&self) -> &ExactScalar {
        &self.a
    }

    pub fn b(&self) -> &ExactScalar {
        &self.b
    }

    pub fn radicand(&self) -> &ExactScalar {
        self.root.radicand()
    }
}

impl ExactScalar {
    pub fn zero() -> Self {
        ExactScalar::Rational(BigRational::zero())
    }

    pub fn one() -> Self {
        ExactScalar::Rational(BigRational::one())
    }

    pub fn from_integer(n: i64) -> Self {
        ExactScalar::Rational(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn from_ratio(numer: i64, denom: i64) -> Self {
        ExactScalar::Rational(BigRational::new(BigInt::from(numer), BigInt::from(denom)))
    }

    /// The rational value, if this scalar is stored as one.
    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            ExactScalar::Rational(r) => Some(r),
            ExactScalar::Ext(_) => None,
        }
    }

    pub fn is_rational(&self) -> bool {
        matches!(self, ExactScalar::Rational(_))
    }

    /// Number of nested radicals in the representation; 0 for rationals.
    pub fn height(&self) -> u32 {
        match self {
            ExactScalar::Rational(_) => 0,
            ExactScalar::Ext(e) => e.root.height(),
        }
    }

    fn top(&self) -> Option<&Radical> {
        match self {
            ExactScalar::Rational(_) => None,
            ExactScalar::Ext(e) => Some(&e.root),
        }
    }

    fn is_stored_zero(&self) -> bool {
        matches!(self, ExactScalar::Rational(r) if r.is_zero())
    }

    /// Builds `a + b·√root`, collapsing to `a` when `b` vanishes.
    fn make(a: ExactScalar, b: ExactScalar, root: Radical) -> Self {
        if b.is_zero() {
            a
        } else {
            ExactScalar::Ext(Arc::new(Ext { a, b, root }))
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            ExactScalar::Rational(r) => r.is_zero(),
            ExactScalar::Ext(e) => {
                // a + b√n = 0 with b ≠ 0 iff a and b have opposite signs and a² = b²n.
                let sa = e.a.signum();
                if sa == 0 || sa == e.b.signum() {
                    return false;
                }
                (e.a.square() - e.b.square() * e.root.radicand().clone()).is_zero()
            }
        }
    }

    /// -1, 0 or 1.
    pub fn signum(&self) -> i8 {
        match self {
            ExactScalar::Rational(r) => {
                if r.is_zero() {
                    0
                } else if r.is_positive() {
                    1
                } else {
                    -1
                }
            }
            ExactScalar::Ext(e) => {
                let sa = e.a.signum();
                let sb = e.b.signum();
                if sa == 0 || sa == sb {
                    return sb;
                }
                let d = (e.a.square() - e.b.square() * e.root.radicand().clone()).signum();
                if sa > 0 {
                    d
                } else {
                    -d
                }
            }
        }
    }

    pub fn is_positive(&self) -> bool {
        self.signum() > 0
    }

    pub fn is_negative(&self) -> bool {
        self.signum() < 0
    }

    pub fn abs(&self) -> Self {
        if self.is_negative() {
            -self.clone()
        } else {
            self.clone()
        }
    }

    pub fn square(&self) -> Self {
        self * self
    }

    pub fn pow(&self, exp: u32) -> Self {
        let mut acc = ExactScalar::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Integer power; negative exponents require a nonzero base.
    pub fn powi(&self, exp: i64) -> Result<Self, QuatError> {
        let p = self.pow(exp.unsigned_abs() as u32);
        if exp < 0 {
            p.inv()
        } else {
            Ok(p)
        }
    }

    pub fn inv(&self) -> Result<Self, QuatError> {
        match self {
            ExactScalar::Rational(r) => {
                if r.is_zero() {
                    Err(QuatError::DivisionByZero)
                } else {
                    Ok(ExactScalar::Rational(r.recip()))
                }
            }
            ExactScalar::Ext(e) => {
                let n = e.root.radicand();
                let norm = e.a.square() - e.b.square() * n.clone();
                if norm.is_zero() {
                    // √n = |a/b| already lives below the top radical.
                    if e.a.is_zero() {
                        return Err(QuatError::DivisionByZero);
                    }
                    let root = e.a.checked_div(&e.b)?.abs();
                    let collapsed = &e.a + &(&e.b * &root);
                    return collapsed.inv();
                }
                let inv_norm = norm.inv()?;
                Ok(ExactScalar::make(&e.a * &inv_norm, -(&e.b * &inv_norm), e.root.clone()))
            }
        }
    }

    pub fn checked_div(&self, rhs: &ExactScalar) -> Result<Self, QuatError> {
        if let (ExactScalar::Rational(a), ExactScalar::Rational(b)) = (self, rhs) {
            if b.is_zero() {
                return Err(QuatError::DivisionByZero);
            }
            return Ok(ExactScalar::Rational(a / b));
        }
        Ok(self * &rhs.inv()?)
    }

    /// Exact square root of a nonnegative scalar, extending the tower by one
    /// level unless the value is already a square of a tower element.
    pub fn sqrt(&self) -> Result<Self, QuatError> {
        match self.signum() {
            -1 => return Err(QuatError::NegativeRadicand),
            0 => return Ok(ExactScalar::zero()),
            _ => {}
        }
        if let Some(root) = self.exact_sqrt() {
            return Ok(root);
        }
        match self {
            ExactScalar::Rational(r) => {
                // √(p/q) = (f/q)·√g where p·q = f²·g.
                let pq = r.numer() * r.denom();
                let (f, g) = split_square_factor(&pq);
                let coeff = BigRational::new(f, r.denom().clone());
                let root = Radical::new(ExactScalar::Rational(BigRational::from_integer(g)));
                Ok(ExactScalar::make(ExactScalar::zero(), ExactScalar::Rational(coeff), root))
            }
            ExactScalar::Ext(_) => {
                Ok(ExactScalar::make(ExactScalar::zero(), ExactScalar::one(), Radical::new(self.clone())))
            }
        }
    }

    /// The nonnegative square root when it exists without adjoining a new
    /// radical. Only called on nonnegative values.
    fn exact_sqrt(&self) -> Option<Self> {
        match self {
            ExactScalar::Rational(r) => {
                let n = perfect_sqrt(r.numer())?;
                let d = perfect_sqrt(r.denom())?;
                Some(ExactScalar::Rational(BigRational::new(n, d)))
            }
            ExactScalar::Ext(e) => {
                // (c + d√n)² = a + b√n  ⇔  c² + d²n = a, 2cd = b.
                let n = e.root.radicand();
                let disc = e.a.square() - e.b.square() * n.clone();
                if disc.is_negative() {
                    return None;
                }
                let root_disc = disc.exact_sqrt()?;
                let half = ExactScalar::from_ratio(1, 2);
                for cand in [&e.a + &root_disc, &e.a - &root_disc] {
                    let c_sq = &cand * &half;
                    if !c_sq.is_positive() {
                        continue;
                    }
                    let Some(c) = c_sq.exact_sqrt() else {
                        continue;
                    };
                    let d = e.b.checked_div(&(&c + &c)).ok()?;
                    let root = ExactScalar::make(c, d, e.root.clone());
                    return Some(root.abs());
                }
                None
            }
        }
    }

    /// A deterministic total order on representations (not on values).
    pub fn structural_cmp(&self, other: &ExactScalar) -> Ordering {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => a.cmp(b),
            (ExactScalar::Rational(_), ExactScalar::Ext(_)) => Ordering::Less,
            (ExactScalar::Ext(_), ExactScalar::Rational(_)) => Ordering::Greater,
            (ExactScalar::Ext(x), ExactScalar::Ext(y)) => {
                if Arc::ptr_eq(x, y) {
                    return Ordering::Equal;
                }
                x.root.order(&y.root).then_with(|| x.a.structural_cmp(&y.a)).then_with(|| x.b.structural_cmp(&y.b))
            }
        }
    }

    /// Floating approximation for display and diagnostics only.
    pub fn to_f64(&self) -> f64 {
        match self {
            ExactScalar::Rational(r) => r.to_f64().unwrap_or(f64::NAN),
            ExactScalar::Ext(e) => e.a.to_f64() + e.b.to_f64() * e.radicand().to_f64().sqrt(),
        }
    }
}

/// Returns `(f, g)` with `n = f²·g`, pulling out squares of small primes and
/// a perfect-square cofactor.
fn split_square_factor(n: &BigInt) -> (BigInt, BigInt) {
    let mut f = BigInt::one();
    let mut g = n.clone();
    for p in small_primes(SQUARE_FACTOR_PRIMES) {
        let p = BigInt::from(p);
        let p_sq = &p * &p;
        if p_sq > g {
            break;
        }
        while (&g % &p_sq).is_zero() {
            g /= &p_sq;
            f *= &p;
        }
    }
    if let Some(r) = perfect_sqrt(&g) {
        f *= r;
        g = BigInt::one();
    }
    (f, g)
}

fn small_primes(count: usize) -> Vec<u64> {
    let mut primes: Vec<u64> = Vec::with_capacity(count);
    let mut candidate = 2u64;
    while primes.len() < count {
        if primes.iter().all(|p| !candidate.is_multiple_of(*p)) {
            primes.push(candidate);
        }
        candidate += 1;
    }
    primes
}

fn perfect_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.sign() == Sign::Minus {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

impl Add<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;

    fn add(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a + b),
            _ if rhs.is_stored_zero() => self.clone(),
            _ if self.is_stored_zero() => rhs.clone(),
            _ => {
                let ord = match (self.top(), rhs.top()) {
                    (Some(x), Some(y)) => x.order(y),
                    (Some(_), None) => Ordering::Greater,
                    (None, _) => Ordering::Less,
                };
                match (ord, self, rhs) {
                    (Ordering::Equal, ExactScalar::Ext(x), ExactScalar::Ext(y)) => {
                        ExactScalar::make(&x.a + &y.a, &x.b + &y.b, x.root.clone())
                    }
                    (Ordering::Greater, ExactScalar::Ext(x), _) => {
                        ExactScalar::make(&x.a + rhs, x.b.clone(), x.root.clone())
                    }
                    (Ordering::Less, _, ExactScalar::Ext(y)) => {
                        ExactScalar::make(self + &y.a, y.b.clone(), y.root.clone())
                    }
                    _ => unreachable!("radical order is consistent with representation"),
                }
            }
        }
    }
}

impl Mul<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;

    fn mul(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a * b),
            _ if self.is_stored_zero() || rhs.is_stored_zero() => ExactScalar::zero(),
            _ => {
                let ord = match (self.top(), rhs.top()) {
                    (Some(x), Some(y)) => x.order(y),
                    (Some(_), None) => Ordering::Greater,
                    (None, _) => Ordering::Less,
                };
                match (ord, self, rhs) {
                    (Ordering::Equal, ExactScalar::Ext(x), ExactScalar::Ext(y)) => {
                        let n = x.root.radicand();
                        let a = &(&x.a * &y.a) + &(&(&x.b * &y.b) * n);
                        let b = &(&x.a * &y.b) + &(&x.b * &y.a);
                        ExactScalar::make(a, b, x.root.clone())
                    }
                    (Ordering::Greater, ExactScalar::Ext(x), _) => {
                        ExactScalar::make(&x.a * rhs, &x.b * rhs, x.root.clone())
                    }
                    (Ordering::Less, _, ExactScalar::Ext(y)) => {
                        ExactScalar::make(self * &y.a, self * &y.b, y.root.clone())
                    }
                    _ => unreachable!("radical order is consistent with representation"),
                }
            }
        }
    }
}

impl Neg for &ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        match self {
            ExactScalar::Rational(r) => ExactScalar::Rational(-r),
            ExactScalar::Ext(e) => ExactScalar::Ext(Arc::new(Ext { a: -&e.a, b: -&e.b, root: e.root.clone() })),
        }
    }
}

impl Sub<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;

    fn sub(self, rhs: &ExactScalar) -> ExactScalar {
        match (self, rhs) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => ExactScalar::Rational(a - b),
            _ => self + &(-rhs),
        }
    }
}

/// Panics on a zero divisor; use [`ExactScalar::checked_div`] otherwise.
impl Div<&ExactScalar> for &ExactScalar {
    type Output = ExactScalar;

    fn div(self, rhs: &ExactScalar) -> ExactScalar {
        self.checked_div(rhs).expect("division by zero scalar")
    }
}

macro_rules! forward_owned_binop {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr<ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&ExactScalar> for ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: &ExactScalar) -> ExactScalar {
                (&self).$method(rhs)
            }
        }
        impl $tr<ExactScalar> for &ExactScalar {
            type Output = ExactScalar;
            fn $method(self, rhs: ExactScalar) -> ExactScalar {
                self.$method(&rhs)
            }
        }
    )*};
}

forward_owned_binop!(Add::add, Sub::sub, Mul::mul, Div::div);

impl Neg for ExactScalar {
    type Output = ExactScalar;

    fn neg(self) -> ExactScalar {
        -&self
    }
}

impl PartialEq for ExactScalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (ExactScalar::Rational(a), ExactScalar::Rational(b)) => a == b,
            _ => (self - other).is_zero(),
        }
    }
}

impl Eq for ExactScalar {}

impl PartialOrd for ExactScalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExactScalar {
    fn cmp(&self, other: &Self) -> Ordering {
        (self - other).signum().cmp(&0)
    }
}

impl From<BigRational> for ExactScalar {
    fn from(r: BigRational) -> Self {
        ExactScalar::Rational(r)
    }
}

impl From<&BigRational> for ExactScalar {
    fn from(r: &BigRational) -> Self {
        ExactScalar::Rational(r.clone())
    }
}

impl From<BigInt> for ExactScalar {
    fn from(n: BigInt) -> Self {
        ExactScalar::Rational(BigRational::from_integer(n))
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::from_integer(n)
    }
}

pub(crate) fn fmt_rational(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExactScalar::Rational(r) => f.write_str(&fmt_rational(r)),
            ExactScalar::Ext(e) => {
                let root = format!("sqrt({})", e.radicand());
                let b = e.b.to_string();
                let term = match b.as_str() {
                    "1" => root,
                    "-1" => format!("-{root}"),
                    _ => format!("{b}*{root}"),
                };
                if e.a.is_zero() {
                    return f.write_str(&term);
                }
                match term.strip_prefix('-') {
                    Some(rest) => write!(f, "({} - {rest})", e.a),
                    None => write!(f, "({} + {term})", e.a),
                }
            }
        }
    }
}

impl Serialize for ExactScalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            ExactScalar::Rational(r) => serializer.serialize_str(&fmt_rational(r)),
            ExactScalar::Ext(e) => {
                let mut st = serializer.serialize_struct("Ext", 3)?;
                st.serialize_field("a", &e.a)?;
                st.serialize_field("b", &e.b)?;
                st.serialize_field("n", e.radicand())?;
                st.end()
            }
        }
    }
}

pub(crate) fn parse_rational(text: &str) -> Option<BigRational> {
    let text = text.trim();
    match text.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().ok()?;
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() || q.is_negative() {
                return None;
            }
            Some(BigRational::new(p, q))
        }
        None => Some(BigRational::from_integer(text.parse().ok()?)),
    }
}
