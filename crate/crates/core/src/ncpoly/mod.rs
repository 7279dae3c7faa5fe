//! Polynomials in non-commuting variables `x1..xm` with rational
//! coefficients.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

use crate::quaternion::Quaternion;
use crate::scalar::{fmt_rational, ExactScalar};

mod parse;
mod weights;

pub use parse::{parse, parse_with_arity};
pub use weights::{infer_weights, WeightAnalysis, WeightVector};

/// Largest `n` accepted by [`std_poly`] unless the caller raises it.
pub const DEFAULT_STD_POLY_CAP: usize = 6;

/// Upper bound on monomials produced while expanding parsed input.
pub const MAX_EXPANDED_MONOMIALS: usize = 250_000;

/// Largest variable index the parser accepts.
pub const MAX_VARIABLE_INDEX: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("syntax error at offset {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown builtin '{name}' at offset {position}")]
    UnknownBuiltin { name: String, position: usize },
    #[error("variable index x{index} out of range (1..={max})")]
    VariableIndexOutOfRange { index: usize, max: usize },
    #[error("expansion exceeds {limit} monomials")]
    ExpansionTooLarge { limit: usize },
    #[error("standard polynomial s{n} exceeds the cap {cap}")]
    CapExceeded { n: usize, cap: usize },
    #[error("expected {expected} arguments, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("the zero polynomial has no weight certificate")]
    ZeroPolynomial,
    #[error("weight certificate does not fit in 64-bit integers")]
    WeightOverflow,
}

/// A word in the variables, stored with 1-based variable indices.
///
/// Ordered length-lexicographically: shorter words first, then
/// lexicographically by index.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Word(pub Vec<usize>);

impl Ord for Word {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Monomial {
    pub coeff: BigRational,
    pub word: Vec<usize>,
}

impl Monomial {
    pub fn new(coeff: BigRational, word: Vec<usize>) -> Self {
        Monomial { coeff, word }
    }

    /// Degree of `x_var` (1-based) in this monomial.
    pub fn degree_in(&self, var: usize) -> usize {
        self.word.iter().filter(|&&v| v == var).count()
    }

    pub fn exponents(&self, num_vars: usize) -> Vec<usize> {
        let mut exps = vec![0; num_vars];
        for &v in &self.word {
            exps[v - 1] += 1;
        }
        exps
    }
}

/// A canonical polynomial: monomials sorted by word, distinct words,
/// nonzero coefficients.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polynomial {
    num_vars: usize,
    monomials: Vec<Monomial>,
}

impl Polynomial {
    pub fn zero(num_vars: usize) -> Self {
        Polynomial { num_vars, monomials: Vec::new() }
    }

    /// Builds the canonical form of an arbitrary list of monomials.
    ///
    /// `num_vars` is raised to cover every index that occurs.
    pub fn from_monomials(num_vars: usize, monomials: impl IntoIterator<Item = Monomial>) -> Self {
        let mut terms: BTreeMap<Word, BigRational> = BTreeMap::new();
        for m in monomials {
            *terms.entry(Word(m.word)).or_insert_with(BigRational::zero) += m.coeff;
        }
        Polynomial::from_terms(num_vars, terms)
    }

    fn from_terms(num_vars: usize, terms: BTreeMap<Word, BigRational>) -> Self {
        let monomials: Vec<Monomial> =
            terms.into_iter().filter(|(_, c)| !c.is_zero()).map(|(w, c)| Monomial::new(c, w.0)).collect();
        let used = monomials.iter().flat_map(|m| m.word.iter().copied()).max().unwrap_or(0);
        Polynomial { num_vars: num_vars.max(used), monomials }
    }

    /// Re-sorts, merges equal words and drops zero coefficients.
    pub fn canonicalize(&self) -> Polynomial {
        Polynomial::from_monomials(self.num_vars, self.monomials.iter().cloned())
    }

    /// The same polynomial viewed as a function of `num_vars` variables.
    pub fn with_num_vars(mut self, num_vars: usize) -> Result<Self, PolyError> {
        let used = self.max_used_var();
        if num_vars < used {
            return Err(PolyError::VariableIndexOutOfRange { index: used, max: num_vars });
        }
        self.num_vars = num_vars;
        Ok(self)
    }

    pub fn num_vars(&self) -> usize {
        self.num_vars
    }

    pub fn monomials(&self) -> &[Monomial] {
        &self.monomials
    }

    pub fn is_zero(&self) -> bool {
        self.monomials.is_empty()
    }

    fn max_used_var(&self) -> usize {
        self.monomials.iter().flat_map(|m| m.word.iter().copied()).max().unwrap_or(0)
    }

    pub fn neg(&self) -> Polynomial {
        Polynomial {
            num_vars: self.num_vars,
            monomials: self.monomials.iter().map(|m| Monomial::new(-m.coeff.clone(), m.word.clone())).collect(),
        }
    }

    pub fn add(&self, other: &Polynomial) -> Polynomial {
        Polynomial::from_monomials(
            self.num_vars.max(other.num_vars),
            self.monomials.iter().chain(&other.monomials).cloned(),
        )
    }

    pub fn sub(&self, other: &Polynomial) -> Polynomial {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        Polynomial::from_monomials(
            self.num_vars,
            self.monomials.iter().map(|m| Monomial::new(&m.coeff * c, m.word.clone())),
        )
    }

    /// Free-algebra product: words concatenate.
    pub fn mul(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        if self.monomials.len().saturating_mul(other.monomials.len()) > MAX_EXPANDED_MONOMIALS {
            return Err(PolyError::ExpansionTooLarge { limit: MAX_EXPANDED_MONOMIALS });
        }
        let mut terms: BTreeMap<Word, BigRational> = BTreeMap::new();
        for a in &self.monomials {
            for b in &other.monomials {
                let mut word = a.word.clone();
                word.extend_from_slice(&b.word);
                *terms.entry(Word(word)).or_insert_with(BigRational::zero) += &a.coeff * &b.coeff;
            }
        }
        Ok(Polynomial::from_terms(self.num_vars.max(other.num_vars), terms))
    }

    pub fn pow(&self, exp: u32) -> Result<Polynomial, PolyError> {
        let mut acc = Polynomial::constant(BigRational::one());
        for _ in 0..exp {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// The Lie bracket `ab - ba`.
    pub fn commutator(&self, other: &Polynomial) -> Result<Polynomial, PolyError> {
        Ok(self.mul(other)?.sub(&other.mul(self)?))
    }

    pub fn constant(c: BigRational) -> Polynomial {
        Polynomial::from_monomials(0, [Monomial::new(c, Vec::new())])
    }

    /// The single variable `x_index` (1-based).
    pub fn var(index: usize) -> Polynomial {
        Polynomial::from_monomials(index, [Monomial::new(BigRational::one(), vec![index])])
    }

    /// Exact value at a tuple of quaternions; the empty word is `1`.
    pub fn evaluate(&self, args: &[Quaternion]) -> Result<Quaternion, PolyError> {
        if args.len() != self.num_vars {
            return Err(PolyError::ArityMismatch { expected: self.num_vars, got: args.len() });
        }
        let mut acc = Quaternion::zero();
        for m in &self.monomials {
            let mut prod = match m.word.split_first() {
                Some((&first, rest)) => rest.iter().fold(args[first - 1].clone(), |p, &v| &p * &args[v - 1]),
                None => Quaternion::one(),
            };
            prod = prod.scale(&ExactScalar::from(&m.coeff));
            acc = &acc + &prod;
        }
        Ok(acc)
    }

    /// Common per-variable degree vector, if all monomials share one.
    pub fn multidegree(&self) -> Option<Vec<usize>> {
        let first = self.monomials.first()?.exponents(self.num_vars);
        self.monomials[1..].iter().all(|m| m.exponents(self.num_vars) == first).then_some(first)
    }

    pub fn is_multilinear(&self) -> bool {
        self.multidegree().is_some_and(|d| d.iter().all(|&e| e == 1))
    }

    pub fn total_degrees(&self) -> impl Iterator<Item = usize> + '_ {
        self.monomials.iter().map(|m| m.word.len())
    }
}

/// The standard polynomial `Σ sgn(σ) x_σ(1)⋯x_σ(n)`, with the default cap.
pub fn std_poly(n: usize) -> Result<Polynomial, PolyError> {
    std_poly_capped(n, DEFAULT_STD_POLY_CAP)
}

pub fn std_poly_capped(n: usize, cap: usize) -> Result<Polynomial, PolyError> {
    if n == 0 || n > cap {
        return Err(PolyError::CapExceeded { n, cap });
    }
    let mut monomials = Vec::new();
    let mut perm: Vec<usize> = (1..=n).collect();
    permutations(&mut perm, 0, false, &mut |p, odd| {
        let c = if odd { -BigRational::one() } else { BigRational::one() };
        monomials.push(Monomial::new(c, p.to_vec()));
    });
    Ok(Polynomial::from_monomials(n, monomials))
}

/// Visits every permutation of `items[start..]` with its parity.
fn permutations(items: &mut [usize], start: usize, odd: bool, visit: &mut impl FnMut(&[usize], bool)) {
    if start + 1 >= items.len() {
        visit(items, odd);
        return;
    }
    for i in start..items.len() {
        items.swap(start, i);
        permutations(items, start + 1, odd ^ (i != start), visit);
        items.swap(start, i);
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.monomials.is_empty() {
            return f.write_str("0");
        }
        for (idx, m) in self.monomials.iter().enumerate() {
            let negative = m.coeff.is_negative();
            let abs = m.coeff.abs();
            match (idx, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let word = m.word.iter().map(|v| format!("x{v}")).collect::<Vec<_>>().join("*");
            if m.word.is_empty() {
                f.write_str(&fmt_rational(&abs))?;
            } else if abs.is_one() {
                f.write_str(&word)?;
            } else {
                write!(f, "{} {}", fmt_rational(&abs), word)?;
            }
        }
        Ok(())
    }
}
