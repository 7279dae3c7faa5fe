//! Semihomogeneity certificates: integer weights `w` and a degree `d` with
//! `Σ_j deg_j(h)·w_j = d` for every monomial `h`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{PolyError, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightVector {
    pub weights: Vec<i64>,
    pub degree: i64,
}

impl WeightVector {
    pub fn new(weights: Vec<i64>, degree: i64) -> Self {
        WeightVector { weights, degree }
    }

    /// Checks the weighted-degree equation on every monomial of `p`.
    pub fn certifies(&self, p: &Polynomial) -> bool {
        self.weights.len() == p.num_vars()
            && p.monomials().iter().all(|m| {
                let lhs: i128 = m.word.iter().map(|&v| self.weights[v - 1] as i128).sum();
                lhs == self.degree as i128
            })
    }
}

/// The full solution space of the weight equations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeightAnalysis {
    /// Primitive integer basis of the rational solution space.
    pub basis: Vec<WeightVector>,
    /// Whether some solution has `d ≠ 0`.
    pub semihomogeneous: bool,
    /// A preferred certificate with `d > 0`: all-ones weights when the
    /// polynomial is homogeneous, otherwise the first such basis vector.
    pub certificate: Option<WeightVector>,
}

pub fn infer_weights(p: &Polynomial) -> Result<WeightAnalysis, PolyError> {
    if p.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let m = p.num_vars();
    let cols = m + 1;
    // one row per distinct exponent vector: exps·w - d = 0
    let mut rows: Vec<Vec<BigRational>> = Vec::new();
    for mono in p.monomials() {
        let mut row: Vec<BigRational> =
            mono.exponents(m).into_iter().map(|e| BigRational::from_integer(BigInt::from(e))).collect();
        row.push(-BigRational::one());
        if !rows.contains(&row) {
            rows.push(row);
        }
    }
    let pivots = rref(&mut rows, cols);
    let free: Vec<usize> = (0..cols).filter(|c| !pivots.contains(c)).collect();

    let mut basis = Vec::with_capacity(free.len());
    for &f in &free {
        let mut v = vec![BigRational::zero(); cols];
        v[f] = BigRational::one();
        for (r, &pc) in pivots.iter().enumerate() {
            v[pc] = -rows[r][f].clone();
        }
        basis.push(to_primitive(&v)?);
    }

    let semihomogeneous = basis.iter().any(|b| b.degree != 0);
    let homogeneous = {
        let degrees: Vec<usize> = p.total_degrees().collect();
        degrees.iter().all(|&d| d == degrees[0]) && degrees[0] != 0
    };
    let certificate = if homogeneous {
        let d = p.monomials()[0].word.len() as i64;
        Some(WeightVector::new(vec![1; m], d))
    } else {
        basis.iter().find(|b| b.degree != 0).cloned()
    };
    Ok(WeightAnalysis { basis, semihomogeneous, certificate })
}

/// In-place reduced row echelon form; returns pivot columns by row.
fn rref(rows: &mut Vec<Vec<BigRational>>, cols: usize) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..cols {
        if r == rows.len() {
            break;
        }
        let Some(p) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else {
            continue;
        };
        rows.swap(r, p);
        let lead = rows[r][c].clone();
        for x in rows[r].iter_mut() {
            *x /= &lead;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let factor = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x -= &factor * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    rows.truncate(r);
    pivots
}

/// Clears denominators and content; orients so that `d > 0`, or the first
/// nonzero weight is positive when `d = 0`.
fn to_primitive(v: &[BigRational]) -> Result<WeightVector, PolyError> {
    let lcm = v.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let mut ints: Vec<BigInt> = v.iter().map(|x| (x * BigRational::from_integer(lcm.clone())).to_integer()).collect();
    let gcd = ints.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if !gcd.is_zero() {
        for x in ints.iter_mut() {
            *x /= &gcd;
        }
    }
    let degree_sign = ints.last().map(|d| d.signum()).unwrap_or_default();
    let flip = if degree_sign.is_zero() {
        ints.iter().find(|x| !x.is_zero()).is_some_and(|x| x.is_negative())
    } else {
        degree_sign.is_negative()
    };
    if flip {
        for x in ints.iter_mut() {
            *x = -&*x;
        }
    }
    let mut out = Vec::with_capacity(ints.len());
    for x in &ints {
        out.push(x.to_i64().ok_or(PolyError::WeightOverflow)?);
    }
    let degree = out.pop().expect("degree column");
    Ok(WeightVector::new(out, degree))
}
