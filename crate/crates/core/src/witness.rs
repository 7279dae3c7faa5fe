//! Exact preimages: input tuples on which a classified multilinear
//! polynomial takes a requested value.
//!
//! Every construction is checked by evaluating the polynomial on the
//! returned tuple, so correctness never rests on the derivation alone.

use num_rational::BigRational;
use num_traits::Zero;
use serde::Serialize;
use thiserror::Error;

use crate::classify::{ImageClass, ImageClassML};
use crate::ncpoly::{PolyError, Polynomial};
use crate::quaternion::{BasisAxis, Quaternion};
use crate::scalar::ExactScalar;
use crate::QuatError;

/// Default cap on polynomial evaluations spent by [`find_mixed_pivot`].
pub const DEFAULT_SEARCH_BUDGET: usize = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum WitnessError {
    #[error("target {target} is not in the image class {class}")]
    ClassMismatch { class: ImageClass, target: String },
    #[error("expected a vector quaternion")]
    NotAVector,
    #[error("expected a nonzero vector")]
    ZeroVector,
    #[error("pivot search exceeded its budget of {budget} evaluations")]
    SearchBudgetExceeded { budget: usize },
    #[error("classification evidence is missing for {0}")]
    MissingEvidence(ImageClass),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Arithmetic(#[from] QuatError),
}

/// `v ↦ lambda·h·v·h⁻¹`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ConjugationMove {
    pub h: Quaternion,
    pub lambda: ExactScalar,
}

impl ConjugationMove {
    pub fn apply(&self, v: &Quaternion) -> Result<Quaternion, QuatError> {
        Ok(v.conjugate_by(&self.h)?.scale(&self.lambda))
    }
}

/// A coordinate along which the value moves from a nonzero scalar to a
/// non-scalar. With `f(w)` the value at `base` with coordinate `index`
/// (1-based) replaced by `w`: `f(w0) = s` and `f(w1) = a + v`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PivotConfig {
    pub base: Vec<Quaternion>,
    pub index: usize,
    pub w0: Quaternion,
    pub w1: Quaternion,
    pub s: ExactScalar,
    pub a: ExactScalar,
    pub v: Quaternion,
}

impl PivotConfig {
    fn args_with(&self, w: Quaternion) -> Vec<Quaternion> {
        let mut args = self.base.clone();
        args[self.index - 1] = w;
        args
    }

    /// Re-evaluates both endpoints against `p`.
    pub fn check(&self, p: &Polynomial) -> Result<bool, PolyError> {
        let at0 = p.evaluate(&self.args_with(self.w0.clone()))?;
        let at1 = p.evaluate(&self.args_with(self.w1.clone()))?;
        Ok(!self.s.is_zero()
            && self.v.is_vector()
            && !self.v.is_zero()
            && at0 == Quaternion::scalar(self.s.clone())
            && at1 == &Quaternion::scalar(self.a.clone()) + &self.v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessResult {
    pub args: Vec<Quaternion>,
    pub target: Quaternion,
    pub verified: bool,
    pub trace: Vec<String>,
}

pub fn verify_witness(p: &Polynomial, args: &[Quaternion], target: &Quaternion) -> Result<bool, PolyError> {
    Ok(p.evaluate(args)? == *target)
}

fn finish(
    p: &Polynomial,
    args: Vec<Quaternion>,
    target: &Quaternion,
    trace: Vec<String>,
) -> Result<WitnessResult, WitnessError> {
    let verified = verify_witness(p, &args, target)?;
    Ok(WitnessResult { args, target: target.clone(), verified, trace })
}

fn mismatch(class: ImageClass, target: &Quaternion) -> WitnessError {
    WitnessError::ClassMismatch { class, target: target.to_string() }
}

/// Move sending `i` to the nonzero vector `t`.
fn align_from_i(t: &Quaternion) -> Result<ConjugationMove, WitnessError> {
    let (a, b, c) = (&t.i, &t.j, &t.k);
    if b.is_zero() && c.is_zero() {
        if a.is_positive() {
            return Ok(ConjugationMove { h: Quaternion::one(), lambda: a.clone() });
        }
        // j·i·j⁻¹ = -i
        return Ok(ConjugationMove { h: BasisAxis::J.quaternion(), lambda: -a });
    }
    // (b, c) ≠ 0, so s > |a| and a + s > 0.
    let s = (a.square() + b.square() + c.square()).sqrt()?;
    let a_plus_s = a + &s;
    let y = -(c.checked_div(&a_plus_s)?);
    let z = b.checked_div(&a_plus_s)?;
    let h = Quaternion::new(ExactScalar::one(), ExactScalar::zero(), y.clone(), z.clone());
    // (1+yj+zk)·i·(1-yj-zk) = (2/(a+s))·t, and h⁻¹ = (1-yj-zk)/(1+y²+z²)
    let spread = ExactScalar::one() + y.square() + z.square();
    let lambda = (&a_plus_s * &spread).checked_div(&ExactScalar::from(2))?;
    Ok(ConjugationMove { h, lambda })
}

fn require_nonzero_vector(q: &Quaternion) -> Result<(), WitnessError> {
    if !q.is_vector() {
        return Err(WitnessError::NotAVector);
    }
    if q.is_zero() {
        return Err(WitnessError::ZeroVector);
    }
    Ok(())
}

/// A move with `lambda·h·v·h⁻¹ = u` for nonzero vectors `v`, `u`.
///
/// Both vectors are aligned with `i`; the conjugators compose as
/// `h_u·conj(h_v)`, so each side contributes at most one square root.
pub fn solve_vector_conjugation(v: &Quaternion, u: &Quaternion) -> Result<ConjugationMove, WitnessError> {
    require_nonzero_vector(v)?;
    require_nonzero_vector(u)?;
    let to_v = align_from_i(v)?;
    let to_u = align_from_i(u)?;
    let h = &to_u.h * &to_v.h.conj();
    let lambda = to_u.lambda.checked_div(&to_v.lambda)?;
    Ok(ConjugationMove { h, lambda })
}

fn evidence_scalar(class: &ImageClassML) -> Result<(Vec<Quaternion>, ExactScalar), WitnessError> {
    let ev = class.scalar_evidence.as_ref().ok_or(WitnessError::MissingEvidence(class.verdict))?;
    Ok((ev.tuple.to_quaternions(), ExactScalar::from(&ev.value)))
}

fn evidence_vector(class: &ImageClassML) -> Result<(Vec<Quaternion>, Quaternion), WitnessError> {
    let ev = class.vector_evidence.as_ref().ok_or(WitnessError::MissingEvidence(class.verdict))?;
    Ok((ev.tuple.to_quaternions(), ev.value.to_quaternion()))
}

pub fn witness_scalar(p: &Polynomial, class: &ImageClassML, t: &ExactScalar) -> Result<WitnessResult, WitnessError> {
    let target = Quaternion::scalar(t.clone());
    if !matches!(class.verdict, ImageClass::ScalarsR | ImageClass::FullH) {
        return Err(mismatch(class.verdict, &target));
    }
    let (mut args, value) = evidence_scalar(class)?;
    let factor = t.checked_div(&value)?;
    args[0] = args[0].scale(&factor);
    let trace = vec![
        format!(
            "scalar evidence p({}) = {}",
            fmt_args(&class.scalar_evidence.as_ref().unwrap().tuple.to_quaternions()),
            value
        ),
        format!("scale x1 by {t} / {value} = {factor}"),
    ];
    finish(p, args, &target, trace)
}

pub fn witness_vector(p: &Polynomial, class: &ImageClassML, u: &Quaternion) -> Result<WitnessResult, WitnessError> {
    if !matches!(class.verdict, ImageClass::VectorsV | ImageClass::FullH) {
        return Err(mismatch(class.verdict, u));
    }
    if !u.is_vector() {
        return Err(WitnessError::NotAVector);
    }
    let (mut args, value) = evidence_vector(class)?;
    if u.is_zero() {
        args[0] = Quaternion::zero();
        return finish(p, args, u, vec!["zero target: x1 = 0".into()]);
    }
    let mv = solve_vector_conjugation(&value, u)?;
    let mut trace = vec![
        format!("vector evidence p({}) = {}", fmt_args(&args), value),
        format!("conjugate by h = {} with lambda = {}", mv.h, mv.lambda),
    ];
    for a in args.iter_mut() {
        *a = a.conjugate_by(&mv.h)?;
    }
    args[0] = args[0].scale(&mv.lambda);
    trace.push("fold lambda into x1".into());
    finish(p, args, u, trace)
}

/// Values reached while walking from the scalar evidence tuple towards the
/// vector evidence tuple.
struct PivotSearch<'a> {
    p: &'a Polynomial,
    scalar_tuple: Vec<Quaternion>,
    vector_tuple: Vec<Quaternion>,
    evaluations: usize,
    budget: usize,
}

impl PivotSearch<'_> {
    /// Depth-first over the shift coefficients `c_k ∈ shifts`: coordinate `k`
    /// becomes `t_k + c_k·s_k`. The walk stops at the first non-scalar value;
    /// it is a pivot when the previous value was a nonzero scalar.
    fn descend(
        &mut self,
        current: &mut Vec<Quaternion>,
        prev: &Quaternion,
        depth: usize,
        shifts: &[i64],
    ) -> Result<Option<PivotConfig>, WitnessError> {
        if depth == current.len() {
            return Ok(None);
        }
        for &c in shifts {
            if self.evaluations >= self.budget {
                return Err(WitnessError::SearchBudgetExceeded { budget: self.budget });
            }
            let w0 = self.scalar_tuple[depth].clone();
            let w1 = &self.vector_tuple[depth] + &w0.scale(&ExactScalar::from(c));
            current[depth] = w1.clone();
            let value = self.p.evaluate(current)?;
            self.evaluations += 1;
            if !value.is_scalar() {
                if !prev.is_zero() {
                    let mut base = current.clone();
                    base[depth] = w0.clone();
                    return Ok(Some(PivotConfig {
                        base,
                        index: depth + 1,
                        w0,
                        w1,
                        s: prev.re_part(),
                        a: value.re_part(),
                        v: value.ve_part(),
                    }));
                }
                continue;
            }
            if let Some(found) = self.descend(current, &value, depth + 1, shifts)? {
                return Ok(Some(found));
            }
        }
        current[depth] = self.scalar_tuple[depth].clone();
        Ok(None)
    }
}

/// Shift coefficients for stage `bound`: `0, 1, -1, 2, -2, …, ±bound`.
fn stage_shifts(bound: i64) -> Vec<i64> {
    std::iter::once(0).chain((1..=bound).flat_map(|b| [b, -b])).collect()
}

pub fn find_mixed_pivot(p: &Polynomial, class: &ImageClassML) -> Result<PivotConfig, WitnessError> {
    find_mixed_pivot_budgeted(p, class, DEFAULT_SEARCH_BUDGET)
}

/// Walks from the scalar evidence tuple `S` to the vector evidence tuple `T`
/// one coordinate at a time. When a zero value blocks the walk, coordinate
/// `k` is replaced by `t_k + c·s_k` for growing integer `c`; a generic choice
/// keeps every intermediate value nonzero, so some stage succeeds.
pub fn find_mixed_pivot_budgeted(
    p: &Polynomial,
    class: &ImageClassML,
    budget: usize,
) -> Result<PivotConfig, WitnessError> {
    if class.verdict != ImageClass::FullH {
        return Err(WitnessError::ClassMismatch { class: class.verdict, target: "a mixed pivot".into() });
    }
    let (scalar_tuple, scalar_value) = evidence_scalar(class)?;
    let (vector_tuple, _) = evidence_vector(class)?;
    let mut search = PivotSearch { p, scalar_tuple, vector_tuple, evaluations: 0, budget };
    let start = Quaternion::scalar(scalar_value);
    for bound in 0.. {
        let shifts = stage_shifts(bound);
        let mut current = search.scalar_tuple.clone();
        if let Some(pivot) = search.descend(&mut current, &start, 0, &shifts)? {
            debug_assert!(pivot.check(p).unwrap_or(false), "pivot invariant");
            return Ok(pivot);
        }
    }
    unreachable!("stages are unbounded and the budget check terminates the loop")
}

pub fn witness_full(p: &Polynomial, class: &ImageClassML, t: &Quaternion) -> Result<WitnessResult, WitnessError> {
    if class.verdict != ImageClass::FullH {
        return Err(mismatch(class.verdict, t));
    }
    let pivot = find_mixed_pivot(p, class)?;
    let mut trace = vec![format!(
        "pivot at x{}: f({}) = {}, f({}) = {}",
        pivot.index,
        pivot.w0,
        pivot.s,
        pivot.w1,
        &Quaternion::scalar(pivot.a.clone()) + &pivot.v
    )];
    let re = t.re_part();
    let ve = t.ve_part();
    if ve.is_zero() {
        let x = re.checked_div(&pivot.s)?;
        trace.push(format!("scalar target: x{} = {} * ({})", pivot.index, x, pivot.w0));
        let args = pivot.args_with(pivot.w0.scale(&x));
        return finish(p, args, t, trace);
    }
    let mv = solve_vector_conjugation(&pivot.v, &ve)?;
    let y = mv.lambda.clone();
    let x = (&re - &(&y * &pivot.a)).checked_div(&pivot.s)?;
    trace.push(format!("blend x = {x}, y = {y}; conjugate by h = {}", mv.h));
    let blended = &pivot.w0.scale(&x) + &pivot.w1.scale(&y);
    let mut args = pivot.args_with(blended);
    for a in args.iter_mut() {
        *a = a.conjugate_by(&mv.h)?;
    }
    finish(p, args, t, trace)
}

/// Dispatches on the verdict and the shape of the target.
pub fn witness(p: &Polynomial, class: &ImageClassML, t: &Quaternion) -> Result<WitnessResult, WitnessError> {
    match class.verdict {
        ImageClass::ZeroPi if t.is_zero() => {
            let args = vec![Quaternion::zero(); p.num_vars()];
            finish(p, args, t, vec!["polynomial identity: every tuple maps to 0".into()])
        }
        ImageClass::ScalarsR if t.is_scalar() => witness_scalar(p, class, &t.re),
        ImageClass::VectorsV if t.is_vector() => witness_vector(p, class, t),
        ImageClass::FullH => witness_full(p, class, t),
        verdict => Err(mismatch(verdict, t)),
    }
}

fn fmt_args(args: &[Quaternion]) -> String {
    args.iter().map(|a| a.to_string()).collect::<Vec<_>>().join(", ")
}

/// Rational scalar `p/q` as a quaternion, for callers building targets.
pub fn rational_target(r: BigRational) -> Quaternion {
    if r.is_zero() {
        Quaternion::zero()
    } else {
        Quaternion::scalar(r.into())
    }
}
