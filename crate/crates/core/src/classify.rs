//! Image classification of multilinear polynomials.
//!
//! A multilinear `p` is determined by its values on the `4^m` tuples of basic
//! quaternions, and each such value is a rational multiple of a single basic
//! quaternion (products of basic quaternions commute up to sign). Looking at
//! which axes occur decides the image:
//!
//! | basis values                  | image |
//! |-------------------------------|-------|
//! | all zero                      | `{0}` |
//! | nonzero ones all scalar       | `ℝ`   |
//! | nonzero ones all vectors      | `V`   |
//! | both scalars and vectors      | `ℍ`   |
//!
//! The enumeration runs entirely in the sign algebra Q8 with integer
//! accumulators over a common denominator.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::ncpoly::Polynomial;
use crate::quaternion::{axis_mul, BasisAxis, Quaternion};
use crate::scalar::fmt_rational;

/// Default bound on the number of variables accepted by [`classify`].
pub const DEFAULT_ARITY_CAP: usize = 8;

/// Environment variable overriding [`DEFAULT_ARITY_CAP`] in the CLI.
pub const ARITY_CAP_ENV: &str = "QUATIMAGE_ARITY_CAP";

/// Below this much work (`4^m · monomials`) enumeration stays on one thread.
const PARALLEL_THRESHOLD: u64 = 1 << 16;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ClassifyError {
    #[error("polynomial is not multilinear")]
    NotMultilinear,
    #[error("{num_vars} variables exceed the classifier cap {cap}")]
    ArityCapExceeded { num_vars: usize, cap: usize },
    #[error("tuple has {got} entries, polynomial has {expected} variables")]
    TupleLength { expected: usize, got: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct BasisTuple(pub Vec<BasisAxis>);

impl BasisTuple {
    /// The `index`-th tuple of length `len` in lexicographic order
    /// (E < I < J < K, first coordinate most significant).
    pub fn from_index(index: u64, len: usize) -> BasisTuple {
        BasisTuple((0..len).map(|c| BasisAxis::from_index((index >> (2 * (len - 1 - c))) as usize & 3)).collect())
    }

    pub fn to_quaternions(&self) -> Vec<Quaternion> {
        self.0.iter().map(|a| a.quaternion()).collect()
    }
}

/// `coeff · axis`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BasisValue {
    pub coeff: BigRational,
    pub axis: BasisAxis,
}

impl BasisValue {
    pub fn zero() -> Self {
        BasisValue { coeff: BigRational::zero(), axis: BasisAxis::E }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn to_quaternion(&self) -> Quaternion {
        self.axis.quaternion().scale(&(&self.coeff).into())
    }
}

impl Serialize for BasisValue {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("BasisValue", 2)?;
        st.serialize_field("coeff", &fmt_rational(&self.coeff))?;
        st.serialize_field("axis", &self.axis)?;
        st.end()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ImageClass {
    ZeroPi,
    ScalarsR,
    VectorsV,
    FullH,
}

impl ImageClass {
    pub fn as_str(self) -> &'static str {
        match self {
            ImageClass::ZeroPi => "ZERO_PI",
            ImageClass::ScalarsR => "SCALARS_R",
            ImageClass::VectorsV => "VECTORS_V",
            ImageClass::FullH => "FULL_H",
        }
    }

    /// Whether `q` lies in the image set named by this class.
    pub fn contains(self, q: &Quaternion) -> bool {
        match self {
            ImageClass::ZeroPi => q.is_zero(),
            ImageClass::ScalarsR => q.is_scalar(),
            ImageClass::VectorsV => q.is_vector(),
            ImageClass::FullH => true,
        }
    }
}

impl fmt::Display for ImageClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl Serialize for ImageClass {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(self.as_str())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ScalarEvidence {
    pub tuple: BasisTuple,
    #[serde(serialize_with = "ser_rational")]
    pub value: BigRational,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct VectorEvidence {
    pub tuple: BasisTuple,
    pub value: BasisValue,
}

fn ser_rational<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&fmt_rational(r))
}

/// Verdict of [`classify`] with the lexicographically first evidence.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ImageClassML {
    #[serde(rename = "class")]
    pub verdict: ImageClass,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub scalar_evidence: Option<ScalarEvidence>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub vector_evidence: Option<VectorEvidence>,
}

/// Integer numerators over a shared denominator.
enum Coeffs {
    Small(Vec<i64>),
    Big(Vec<BigInt>),
}

/// A multilinear polynomial compiled for basis-tuple evaluation.
pub struct BasisKernel {
    num_vars: usize,
    words: Vec<Vec<u8>>,
    coeffs: Coeffs,
    denom: BigInt,
}

impl BasisKernel {
    pub fn new(p: &Polynomial) -> Result<Self, ClassifyError> {
        if !p.is_zero() && !p.is_multilinear() {
            return Err(ClassifyError::NotMultilinear);
        }
        let denom = p.monomials().iter().fold(BigInt::one(), |acc, m| acc.lcm(m.coeff.denom()));
        let numers: Vec<BigInt> = p.monomials().iter().map(|m| m.coeff.numer() * (&denom / m.coeff.denom())).collect();
        let coeffs = match numers.iter().map(|n| n.to_i64()).collect::<Option<Vec<_>>>() {
            Some(small) => Coeffs::Small(small),
            None => Coeffs::Big(numers),
        };
        let words = p.monomials().iter().map(|m| m.word.iter().map(|&v| (v - 1) as u8).collect()).collect();
        Ok(BasisKernel { num_vars: p.num_vars(), words, coeffs, denom })
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn tuple_count(&self) -> u64 {
        1u64 << (2 * self.num_vars)
    }

    /// Signed axis of each monomial's product at `tuple`.
    #[inline]
    fn monomial_products<'a>(&'a self, tuple: &'a [BasisAxis]) -> impl Iterator<Item = (bool, BasisAxis)> + 'a {
        self.words.iter().map(move |word| {
            word.iter().fold((false, BasisAxis::E), |(neg, acc), &v| {
                let (n, axis) = axis_mul(acc, tuple[v as usize]);
                (neg ^ n, axis)
            })
        })
    }

    pub fn eval(&self, tuple: &[BasisAxis]) -> Result<BasisValue, ClassifyError> {
        if tuple.len() != self.num_vars {
            return Err(ClassifyError::TupleLength { expected: self.num_vars, got: tuple.len() });
        }
        let (numer, axes) = match &self.coeffs {
            Coeffs::Small(cs) => {
                let mut acc = [0i128; 4];
                for ((neg, axis), &c) in self.monomial_products(tuple).zip(cs) {
                    acc[axis.index()] += if neg { -(c as i128) } else { c as i128 };
                }
                let axes: Vec<usize> = (0..4).filter(|&a| acc[a] != 0).collect();
                let numer = axes.first().map(|&a| BigInt::from(acc[a])).unwrap_or_default();
                (numer, axes)
            }
            Coeffs::Big(cs) => {
                let mut acc: [BigInt; 4] = Default::default();
                for ((neg, axis), c) in self.monomial_products(tuple).zip(cs) {
                    if neg {
                        acc[axis.index()] -= c;
                    } else {
                        acc[axis.index()] += c;
                    }
                }
                let axes: Vec<usize> = (0..4).filter(|&a| !acc[a].is_zero()).collect();
                let numer = axes.first().map(|&a| acc[a].clone()).unwrap_or_default();
                (numer, axes)
            }
        };
        // products of basic quaternions agree up to sign, so at most one axis survives
        debug_assert!(axes.len() <= 1, "basis value spread over axes {axes:?}");
        match axes.first() {
            None => Ok(BasisValue::zero()),
            Some(&a) => {
                Ok(BasisValue { coeff: BigRational::new(numer, self.denom.clone()), axis: BasisAxis::from_index(a) })
            }
        }
    }

    /// First scalar and first vector hit in lexicographic order.
    fn scan(&self) -> ScanResult {
        let total = self.tuple_count();
        let work = total.saturating_mul(self.words.len().max(1) as u64);
        let scan_range = |lo: u64, hi: u64| {
            let mut out = ScanResult::default();
            let mut tuple = BasisTuple::from_index(lo, self.num_vars).0;
            for idx in lo..hi {
                if idx != lo {
                    advance(&mut tuple);
                }
                let value = self.eval(&tuple).expect("tuple length matches");
                if value.is_zero() {
                    continue;
                }
                let slot = if value.axis == BasisAxis::E { &mut out.scalar } else { &mut out.vector };
                if slot.is_none() {
                    *slot = Some((idx, value));
                }
                if out.scalar.is_some() && out.vector.is_some() {
                    break;
                }
            }
            out
        };
        if work < PARALLEL_THRESHOLD {
            return scan_range(0, total);
        }
        let chunk = (total / (rayon::current_num_threads() as u64 * 8)).max(256);
        let starts: Vec<u64> = (0..total).step_by(chunk as usize).collect();
        starts
            .into_par_iter()
            .map(|lo| scan_range(lo, (lo + chunk).min(total)))
            .reduce(ScanResult::default, ScanResult::merge)
    }
}

/// Next tuple in lexicographic order; wraps around after `K..K`.
fn advance(tuple: &mut [BasisAxis]) {
    for slot in tuple.iter_mut().rev() {
        if *slot == BasisAxis::K {
            *slot = BasisAxis::E;
        } else {
            *slot = BasisAxis::from_index(slot.index() + 1);
            return;
        }
    }
}

#[derive(Default)]
struct ScanResult {
    scalar: Option<(u64, BasisValue)>,
    vector: Option<(u64, BasisValue)>,
}

impl ScanResult {
    fn merge(self, other: ScanResult) -> ScanResult {
        fn first(a: Option<(u64, BasisValue)>, b: Option<(u64, BasisValue)>) -> Option<(u64, BasisValue)> {
            match (a, b) {
                (Some(x), Some(y)) => Some(if x.0 <= y.0 { x } else { y }),
                (x, y) => x.or(y),
            }
        }
        ScanResult { scalar: first(self.scalar, other.scalar), vector: first(self.vector, other.vector) }
    }
}

/// Value of a multilinear `p` at a tuple of basic quaternions.
pub fn eval_on_basis_tuple(p: &Polynomial, tuple: &BasisTuple) -> Result<BasisValue, ClassifyError> {
    BasisKernel::new(p)?.eval(&tuple.0)
}

pub fn classify(p: &Polynomial) -> Result<ImageClassML, ClassifyError> {
    classify_capped(p, DEFAULT_ARITY_CAP)
}

pub fn classify_capped(p: &Polynomial, cap: usize) -> Result<ImageClassML, ClassifyError> {
    if p.is_zero() {
        return Ok(ImageClassML { verdict: ImageClass::ZeroPi, scalar_evidence: None, vector_evidence: None });
    }
    if !p.is_multilinear() || p.num_vars() == 0 {
        return Err(ClassifyError::NotMultilinear);
    }
    if p.num_vars() > cap {
        return Err(ClassifyError::ArityCapExceeded { num_vars: p.num_vars(), cap });
    }
    let kernel = BasisKernel::new(p)?;
    let scan = kernel.scan();
    let m = p.num_vars();
    let scalar_evidence =
        scan.scalar.map(|(idx, v)| ScalarEvidence { tuple: BasisTuple::from_index(idx, m), value: v.coeff });
    let vector_evidence =
        scan.vector.map(|(idx, v)| VectorEvidence { tuple: BasisTuple::from_index(idx, m), value: v });
    let verdict = match (&scalar_evidence, &vector_evidence) {
        (None, None) => ImageClass::ZeroPi,
        (Some(_), None) => ImageClass::ScalarsR,
        (None, Some(_)) => ImageClass::VectorsV,
        (Some(_), Some(_)) => ImageClass::FullH,
    };
    Ok(ImageClassML { verdict, scalar_evidence, vector_evidence })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::parse;
    use BasisAxis::*;

    fn rat(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn basis_tuple_examples() {
        let comm = parse("[x1,x2]").unwrap();
        assert_eq!(eval_on_basis_tuple(&comm, &BasisTuple(vec![I, J])).unwrap(), BasisValue { coeff: rat(2), axis: K });
        let s4 = parse("s4").unwrap();
        for idx in 0..256 {
            assert!(eval_on_basis_tuple(&s4, &BasisTuple::from_index(idx, 4)).unwrap().is_zero());
        }
        let central = parse("[x1,x2][x3,x4]+[x3,x4][x1,x2]").unwrap();
        assert_eq!(
            eval_on_basis_tuple(&central, &BasisTuple(vec![I, J, I, J])).unwrap(),
            BasisValue { coeff: rat(-8), axis: E }
        );
    }

    #[test]
    fn basis_tuple_errors() {
        let sq = parse("[x1,x2]^2").unwrap();
        assert_eq!(eval_on_basis_tuple(&sq, &BasisTuple(vec![I, J])), Err(ClassifyError::NotMultilinear));
        let comm = parse("[x1,x2]").unwrap();
        assert!(matches!(eval_on_basis_tuple(&comm, &BasisTuple(vec![I])), Err(ClassifyError::TupleLength { .. })));
    }

    #[test]
    fn lexicographic_tuple_indexing() {
        assert_eq!(BasisTuple::from_index(0, 2), BasisTuple(vec![E, E]));
        assert_eq!(BasisTuple::from_index(1, 2), BasisTuple(vec![E, I]));
        assert_eq!(BasisTuple::from_index(4, 2), BasisTuple(vec![I, E]));
        let mut t = vec![E, K];
        advance(&mut t);
        assert_eq!(t, vec![I, E]);
    }

    #[test]
    fn classifier_goldens() {
        assert_eq!(classify(&parse("s4").unwrap()).unwrap().verdict, ImageClass::ZeroPi);
        assert_eq!(classify(&parse("[x1,x2]").unwrap()).unwrap().verdict, ImageClass::VectorsV);
        assert_eq!(classify(&parse("[x1,x2][x3,x4]+[x3,x4][x1,x2]").unwrap()).unwrap().verdict, ImageClass::ScalarsR);
        let full = classify(&parse("x1x2").unwrap()).unwrap();
        assert_eq!(full.verdict, ImageClass::FullH);
        assert_eq!(full.scalar_evidence, Some(ScalarEvidence { tuple: BasisTuple(vec![E, E]), value: rat(1) }));
        assert_eq!(
            full.vector_evidence,
            Some(VectorEvidence { tuple: BasisTuple(vec![E, I]), value: BasisValue { coeff: rat(1), axis: I } })
        );
    }

    #[test]
    fn evidence_invariants_per_verdict() {
        let zero = classify(&parse("s4").unwrap()).unwrap();
        assert!(zero.scalar_evidence.is_none() && zero.vector_evidence.is_none());
        let central = classify(&parse("[x1,x2][x3,x4]+[x3,x4][x1,x2]").unwrap()).unwrap();
        assert_eq!(central.scalar_evidence.unwrap().tuple, BasisTuple(vec![I, J, I, J]));
        assert!(central.vector_evidence.is_none());
        let lie = classify(&parse("[x1,x2]").unwrap()).unwrap();
        assert!(lie.scalar_evidence.is_none());
        let v = lie.vector_evidence.unwrap();
        assert_eq!(v.tuple, BasisTuple(vec![I, J]));
        assert_ne!(v.value.axis, E);
    }

    #[test]
    fn zero_and_invalid_inputs() {
        assert_eq!(classify(&Polynomial::zero(3)).unwrap().verdict, ImageClass::ZeroPi);
        assert_eq!(classify(&parse("[x1,x2]^2").unwrap()), Err(ClassifyError::NotMultilinear));
        assert_eq!(classify(&parse("5").unwrap()), Err(ClassifyError::NotMultilinear));
        let big = parse("x1x2x3").unwrap();
        assert_eq!(classify_capped(&big, 2), Err(ClassifyError::ArityCapExceeded { num_vars: 3, cap: 2 }));
    }

    #[test]
    fn parallel_scan_matches_sequential_first_hits() {
        // s6 on 4^6 tuples with 720 monomials crosses the parallel threshold
        let p = parse("s6 + x6x5x4x3x2x1").unwrap();
        let kernel = BasisKernel::new(&p).unwrap();
        let par = kernel.scan();
        let mut seq = ScanResult::default();
        for idx in 0..kernel.tuple_count() {
            let v = kernel.eval(&BasisTuple::from_index(idx, 6).0).unwrap();
            if v.is_zero() {
                continue;
            }
            let slot = if v.axis == E { &mut seq.scalar } else { &mut seq.vector };
            if slot.is_none() {
                *slot = Some((idx, v));
            }
        }
        assert_eq!(par.scalar, seq.scalar);
        assert_eq!(par.vector, seq.vector);
    }

    #[test]
    fn big_coefficients_use_the_bigint_path() {
        let p = parse("100000000000000000000000 x1x2 - 1/3 x2x1").unwrap();
        let v = eval_on_basis_tuple(&p, &BasisTuple(vec![I, J])).unwrap();
        let expected = BigRational::new(BigInt::from(300000000000000000000001u128), BigInt::from(3));
        assert_eq!(v, BasisValue { coeff: expected, axis: K });
    }

    #[test]
    fn serializes_with_stable_field_order() {
        let full = classify(&parse("x1x2").unwrap()).unwrap();
        assert_eq!(
            serde_json::to_string(&full).unwrap(),
            r#"{"class":"FULL_H","scalar_evidence":{"tuple":["E","E"],"value":"1"},"vector_evidence":{"tuple":["E","I"],"value":{"coeff":"1","axis":"I"}}}"#
        );
        let zero = classify(&parse("s4").unwrap()).unwrap();
        assert_eq!(serde_json::to_string(&zero).unwrap(), r#"{"class":"ZERO_PI"}"#);
    }
}
