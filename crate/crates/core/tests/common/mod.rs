//! Reference implementations used to cross-check the library.
//!
//! Quaternion products here go through the left-multiplication matrix of
//! the first factor instead of the Hamilton formula used by the library.

#![allow(dead_code)]

use num_bigint::BigInt;
use num_rational::BigRational;
use quatimage::ncpoly::{Monomial, Polynomial};
use quatimage::{BasisAxis, ExactScalar, Quaternion};
use rand::seq::SliceRandom;
use rand::Rng;

/// Matrix of `r ↦ q·r` in the basis `1, i, j, k`.
fn left_matrix(q: &Quaternion) -> [[ExactScalar; 4]; 4] {
    let (a, b, c, d) = (q.re.clone(), q.i.clone(), q.j.clone(), q.k.clone());
    [
        [a.clone(), -&b, -&c, -&d],
        [b.clone(), a.clone(), -&d, c.clone()],
        [c.clone(), d.clone(), a.clone(), -&b],
        [d, -&c, b, a],
    ]
}

pub fn mul(p: &Quaternion, q: &Quaternion) -> Quaternion {
    let m = left_matrix(p);
    let r = [&q.re, &q.i, &q.j, &q.k];
    let row = |i: usize| (0..4).fold(ExactScalar::zero(), |acc, j| acc + &m[i][j] * r[j]);
    Quaternion::new(row(0), row(1), row(2), row(3))
}

pub fn eval(p: &Polynomial, args: &[Quaternion]) -> Quaternion {
    let mut total = Quaternion::zero();
    for m in p.monomials() {
        let mut prod = Quaternion::scalar(ExactScalar::from(&m.coeff));
        for &v in &m.word {
            prod = mul(&prod, &args[v - 1]);
        }
        total = &total + &prod;
    }
    total
}

/// `[re, i, j, k]` with machine integers.
pub type IntQuat = [i64; 4];

pub fn int_axis(axis: BasisAxis) -> IntQuat {
    let mut q = [0; 4];
    q[axis.index()] = 1;
    q
}

pub fn int_mul(p: IntQuat, q: IntQuat) -> IntQuat {
    let [a1, b1, c1, d1] = p;
    let [a2, b2, c2, d2] = q;
    [
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
        a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
        a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2,
    ]
}

/// Evaluation on basis quaternions through integer products.
pub fn eval_on_axes(p: &Polynomial, axes: &[BasisAxis]) -> Quaternion {
    let mut acc = [
        BigRational::from_integer(0.into()),
        BigRational::from_integer(0.into()),
        BigRational::from_integer(0.into()),
        BigRational::from_integer(0.into()),
    ];
    for m in p.monomials() {
        let prod = m.word.iter().fold([1, 0, 0, 0], |q, &v| int_mul(q, int_axis(axes[v - 1])));
        for (slot, x) in acc.iter_mut().zip(prod) {
            *slot += &m.coeff * BigRational::from_integer(BigInt::from(x));
        }
    }
    let [a, b, c, d] = acc;
    Quaternion::from_rationals(a, b, c, d)
}

/// Full expansion `Σ_axes Π_j x_j[axis_j] · p(e_axes)` over all `4^m` tuples.
pub fn basis_expansion(p: &Polynomial, args: &[Quaternion]) -> Quaternion {
    let m = args.len();
    let mut total = Quaternion::zero();
    for idx in 0..4usize.pow(m as u32) {
        let axes: Vec<BasisAxis> = (0..m).map(|j| BasisAxis::from_index((idx >> (2 * (m - 1 - j))) & 3)).collect();
        let weight = axes.iter().zip(args).fold(ExactScalar::one(), |acc, (&ax, x)| acc * x.coord(ax));
        if weight.is_zero() {
            continue;
        }
        total = &total + &eval_on_axes(p, &axes).scale(&weight);
    }
    total
}

/// `p/q` with `|p/q| ≤ bound` and `1 ≤ q ≤ 6`.
pub fn bounded_rational<R: Rng>(rng: &mut R, bound: i64) -> BigRational {
    let q = rng.gen_range(1..=6i64);
    let p = rng.gen_range(-bound * q..=bound * q);
    BigRational::new(p.into(), q.into())
}

/// Random multilinear polynomial in exactly `m` variables with up to
/// `max_terms` monomials and coefficients in `[-10, 10]`.
pub fn random_multilinear<R: Rng>(rng: &mut R, m: usize, max_terms: usize) -> Polynomial {
    loop {
        let terms = rng.gen_range(1..=max_terms);
        let mons: Vec<Monomial> = (0..terms)
            .map(|_| {
                let mut word: Vec<usize> = (1..=m).collect();
                word.shuffle(rng);
                Monomial::new(bounded_rational(rng, 10), word)
            })
            .collect();
        let p = Polynomial::from_monomials(m, mons);
        if !p.is_zero() {
            return p;
        }
    }
}

pub fn rational_quat<R: Rng>(rng: &mut R, bound: i64) -> Quaternion {
    Quaternion::from_rationals(
        bounded_rational(rng, bound),
        bounded_rational(rng, bound),
        bounded_rational(rng, bound),
        bounded_rational(rng, bound),
    )
}

pub fn q(text: &str) -> Quaternion {
    text.parse().expect("quaternion literal")
}
