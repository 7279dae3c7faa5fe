//! Hamilton quaternions over [`ExactScalar`] and the sign algebra Q8 of
//! signed basic quaternions.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::scalar::{parse_rational, ExactScalar};
use crate::QuatError;

/// One of the four basic quaternions `1, i, j, k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum BasisAxis {
    E,
    I,
    J,
    K,
}

impl BasisAxis {
    pub const ALL: [BasisAxis; 4] = [BasisAxis::E, BasisAxis::I, BasisAxis::J, BasisAxis::K];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(idx: usize) -> BasisAxis {
        BasisAxis::ALL[idx & 3]
    }

    pub fn quaternion(self) -> Quaternion {
        let mut q = Quaternion::zero();
        *q.coord_mut(self) = ExactScalar::one();
        q
    }
}

/// An element `±q` of the quaternion group Q8.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct SignedBasis {
    pub negative: bool,
    pub axis: BasisAxis,
}

/// `AXIS_PRODUCT[a][b] = (negative, axis)` of the Hamilton product `a·b`.
const AXIS_PRODUCT: [[(bool, BasisAxis); 4]; 4] = {
    use BasisAxis::*;
    [
        [(false, E), (false, I), (false, J), (false, K)],
        [(false, I), (true, E), (false, K), (true, J)],
        [(false, J), (true, K), (true, E), (false, I)],
        [(false, K), (false, J), (true, I), (true, E)],
    ]
};

/// Product of two basis axes as `(negative, axis)`.
#[inline]
pub fn axis_mul(a: BasisAxis, b: BasisAxis) -> (bool, BasisAxis) {
    AXIS_PRODUCT[a.index()][b.index()]
}

impl SignedBasis {
    pub fn new(negative: bool, axis: BasisAxis) -> Self {
        SignedBasis { negative, axis }
    }

    pub fn pos(axis: BasisAxis) -> Self {
        SignedBasis::new(false, axis)
    }

    pub fn neg(axis: BasisAxis) -> Self {
        SignedBasis::new(true, axis)
    }

    /// All eight elements of Q8.
    pub fn all() -> impl Iterator<Item = SignedBasis> {
        [false, true].into_iter().flat_map(|neg| BasisAxis::ALL.into_iter().map(move |a| SignedBasis::new(neg, a)))
    }

    pub fn to_quaternion(self) -> Quaternion {
        let q = self.axis.quaternion();
        if self.negative {
            -q
        } else {
            q
        }
    }
}

/// Hamilton product in Q8.
pub fn q8_mul(a: SignedBasis, b: SignedBasis) -> SignedBasis {
    let (neg, axis) = axis_mul(a.axis, b.axis);
    SignedBasis::new(neg ^ a.negative ^ b.negative, axis)
}

impl Mul for SignedBasis {
    type Output = SignedBasis;

    fn mul(self, rhs: SignedBasis) -> SignedBasis {
        q8_mul(self, rhs)
    }
}

/// `re + i·i + j·j + k·k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Quaternion {
    pub re: ExactScalar,
    pub i: ExactScalar,
    pub j: ExactScalar,
    pub k: ExactScalar,
}

impl Quaternion {
    pub fn new(re: ExactScalar, i: ExactScalar, j: ExactScalar, k: ExactScalar) -> Self {
        Quaternion { re, i, j, k }
    }

    pub fn from_rationals(re: BigRational, i: BigRational, j: BigRational, k: BigRational) -> Self {
        Quaternion::new(re.into(), i.into(), j.into(), k.into())
    }

    /// Integer coordinates, mostly for tests and literals.
    pub fn from_ints(re: i64, i: i64, j: i64, k: i64) -> Self {
        Quaternion::new(re.into(), i.into(), j.into(), k.into())
    }

    pub fn zero() -> Self {
        Quaternion::scalar(ExactScalar::zero())
    }

    pub fn one() -> Self {
        Quaternion::scalar(ExactScalar::one())
    }

    pub fn scalar(s: ExactScalar) -> Self {
        Quaternion::new(s, ExactScalar::zero(), ExactScalar::zero(), ExactScalar::zero())
    }

    pub fn vector(i: ExactScalar, j: ExactScalar, k: ExactScalar) -> Self {
        Quaternion::new(ExactScalar::zero(), i, j, k)
    }

    pub fn coord(&self, axis: BasisAxis) -> &ExactScalar {
        match axis {
            BasisAxis::E => &self.re,
            BasisAxis::I => &self.i,
            BasisAxis::J => &self.j,
            BasisAxis::K => &self.k,
        }
    }

    pub fn coord_mut(&mut self, axis: BasisAxis) -> &mut ExactScalar {
        match axis {
            BasisAxis::E => &mut self.re,
            BasisAxis::I => &mut self.i,
            BasisAxis::J => &mut self.j,
            BasisAxis::K => &mut self.k,
        }
    }

    pub fn coords(&self) -> [&ExactScalar; 4] {
        [&self.re, &self.i, &self.j, &self.k]
    }

    pub fn is_zero(&self) -> bool {
        self.coords().iter().all(|c| c.is_zero())
    }

    pub fn is_scalar(&self) -> bool {
        self.i.is_zero() && self.j.is_zero() && self.k.is_zero()
    }

    pub fn is_vector(&self) -> bool {
        self.re.is_zero()
    }

    /// True when every coordinate is stored as a rational.
    pub fn is_rational(&self) -> bool {
        self.coords().iter().all(|c| c.is_rational())
    }

    pub fn re_part(&self) -> ExactScalar {
        self.re.clone()
    }

    pub fn ve_part(&self) -> Quaternion {
        Quaternion::vector(self.i.clone(), self.j.clone(), self.k.clone())
    }

    /// Square of the Euclidean norm; stays inside the exact field.
    pub fn norm_sq(&self) -> ExactScalar {
        self.coords().iter().fold(ExactScalar::zero(), |acc, c| &acc + &c.square())
    }

    pub fn conj(&self) -> Quaternion {
        Quaternion::new(self.re.clone(), -&self.i, -&self.j, -&self.k)
    }

    pub fn scale(&self, s: &ExactScalar) -> Quaternion {
        Quaternion::new(&self.re * s, &self.i * s, &self.j * s, &self.k * s)
    }

    pub fn inv(&self) -> Result<Quaternion, QuatError> {
        let n = self.norm_sq();
        if n.is_zero() {
            return Err(QuatError::DivisionByZero);
        }
        Ok(self.conj().scale(&n.inv()?))
    }

    /// `h·self·h⁻¹`.
    pub fn conjugate_by(&self, h: &Quaternion) -> Result<Quaternion, QuatError> {
        if self.is_scalar() {
            if h.is_zero() {
                return Err(QuatError::DivisionByZero);
            }
            return Ok(self.clone());
        }
        Ok(&(h * self) * &h.inv()?)
    }

    pub fn pow(&self, exp: u32) -> Quaternion {
        let mut acc = Quaternion::one();
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }
}

impl From<ExactScalar> for Quaternion {
    fn from(s: ExactScalar) -> Self {
        Quaternion::scalar(s)
    }
}

impl From<SignedBasis> for Quaternion {
    fn from(b: SignedBasis) -> Self {
        b.to_quaternion()
    }
}

impl From<BasisAxis> for Quaternion {
    fn from(a: BasisAxis) -> Self {
        a.quaternion()
    }
}

impl Add<&Quaternion> for &Quaternion {
    type Output = Quaternion;

    fn add(self, rhs: &Quaternion) -> Quaternion {
        Quaternion::new(&self.re + &rhs.re, &self.i + &rhs.i, &self.j + &rhs.j, &self.k + &rhs.k)
    }
}

impl Sub<&Quaternion> for &Quaternion {
    type Output = Quaternion;

    fn sub(self, rhs: &Quaternion) -> Quaternion {
        Quaternion::new(&self.re - &rhs.re, &self.i - &rhs.i, &self.j - &rhs.j, &self.k - &rhs.k)
    }
}

impl Mul<&Quaternion> for &Quaternion {
    type Output = Quaternion;

    fn mul(self, rhs: &Quaternion) -> Quaternion {
        let (a1, b1, c1, d1) = (&self.re, &self.i, &self.j, &self.k);
        let (a2, b2, c2, d2) = (&rhs.re, &rhs.i, &rhs.j, &rhs.k);
        Quaternion::new(
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
            a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
            a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
        )
    }
}

impl Neg for &Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        Quaternion::new(-&self.re, -&self.i, -&self.j, -&self.k)
    }
}

impl Neg for Quaternion {
    type Output = Quaternion;

    fn neg(self) -> Quaternion {
        -&self
    }
}

macro_rules! forward_owned_quat_binop {
    ($($tr:ident :: $method:ident),*) => {$(
        impl $tr<Quaternion> for Quaternion {
            type Output = Quaternion;
            fn $method(self, rhs: Quaternion) -> Quaternion {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&Quaternion> for Quaternion {
            type Output = Quaternion;
            fn $method(self, rhs: &Quaternion) -> Quaternion {
                (&self).$method(rhs)
            }
        }
    )*};
}

forward_owned_quat_binop!(Add::add, Sub::sub, Mul::mul);

impl fmt::Display for Quaternion {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut wrote = false;
        for (axis, suffix) in [(BasisAxis::E, ""), (BasisAxis::I, "i"), (BasisAxis::J, "j"), (BasisAxis::K, "k")] {
            let c = self.coord(axis);
            if c.is_zero() {
                continue;
            }
            let text = match (c.to_string().as_str(), suffix) {
                ("1", "i" | "j" | "k") => String::new(),
                ("-1", "i" | "j" | "k") => "-".to_string(),
                (t, _) => t.to_string(),
            };
            if wrote {
                match text.strip_prefix('-') {
                    Some(rest) => write!(f, " - {rest}{suffix}")?,
                    None => write!(f, " + {text}{suffix}")?,
                }
            } else {
                write!(f, "{text}{suffix}")?;
            }
            wrote = true;
        }
        if !wrote {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Parses rational quaternion literals such as `3+4i`, `-2+j-k`, `1/2i - 3k`.
///
/// Grammar: `[rational] [('+'|'-') [rational] ('i'|'j'|'k')]*`; the leading
/// term may also carry a sign or an axis, and missing coefficients are 1.
impl FromStr for Quaternion {
    type Err = QuatError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let text: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if text.is_empty() {
            return Err(QuatError::Parse("empty quaternion literal".into()));
        }
        let mut acc = [BigRational::zero(), BigRational::zero(), BigRational::zero(), BigRational::zero()];
        let bytes = text.as_bytes();
        let mut pos = 0;
        let mut first = true;
        while pos < bytes.len() {
            let start = pos;
            let mut negative = false;
            match bytes[pos] {
                b'+' | b'-' => {
                    negative = bytes[pos] == b'-';
                    pos += 1;
                }
                _ if !first => {
                    return Err(QuatError::Parse(format!("expected '+' or '-' at offset {pos}")));
                }
                _ => {}
            }
            let coeff_start = pos;
            while pos < bytes.len() && (bytes[pos].is_ascii_digit() || bytes[pos] == b'/') {
                pos += 1;
            }
            let coeff_text = &text[coeff_start..pos];
            let axis = match bytes.get(pos) {
                Some(b'i') => Some(BasisAxis::I),
                Some(b'j') => Some(BasisAxis::J),
                Some(b'k') => Some(BasisAxis::K),
                Some(b'+') | Some(b'-') | None => None,
                Some(_) => {
                    return Err(QuatError::Parse(format!("unexpected character at offset {pos}")));
                }
            };
            if axis.is_some() {
                pos += 1;
            }
            let mut coeff = if coeff_text.is_empty() {
                if axis.is_none() {
                    return Err(QuatError::Parse(format!("missing term at offset {start}")));
                }
                BigRational::one()
            } else {
                parse_rational(coeff_text).ok_or_else(|| QuatError::Parse(format!("bad rational '{coeff_text}'")))?
            };
            if negative {
                coeff = -coeff;
            }
            let slot = axis.unwrap_or(BasisAxis::E).index();
            acc[slot] += coeff;
            first = false;
        }
        let [re, i, j, k] = acc;
        Ok(Quaternion::from_rationals(re, i, j, k))
    }
}
