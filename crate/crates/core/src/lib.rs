//! Exact evaluation of non-commutative polynomials on the Hamilton
//! quaternions, with image classification and constructive preimages.
//!
//! * [`scalar`] and [`quaternion`]: exact arithmetic over a tower of real
//!   quadratic extensions of ℚ.
//! * [`ncpoly`]: free-algebra polynomials, parsing and structural analysis.
//! * [`classify`]: decides whether a multilinear polynomial has image
//!   `{0}`, `ℝ`, `V` or all of `ℍ`.
//! * [`witness`]: builds exact input tuples reaching a requested value.
//! * [`homogeneous`]: seeded sampling for semihomogeneous polynomials, the
//!   2×2 complex matrix embedding and eigenvalue-ratio helpers.
//! * [`corpus`] and [`cli`]: the builtin example set and the command line.

use thiserror::Error;

pub mod classify;
pub mod cli;
pub mod corpus;
pub mod homogeneous;
pub mod ncpoly;
pub mod quaternion;
pub mod random;
pub mod scalar;
pub mod witness;

pub use classify::{classify, eval_on_basis_tuple, BasisTuple, BasisValue, ImageClass, ImageClassML};
pub use ncpoly::{Monomial, Polynomial, WeightVector};
pub use quaternion::{q8_mul, BasisAxis, Quaternion, SignedBasis};
pub use scalar::ExactScalar;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum QuatError {
    #[error("division by zero")]
    DivisionByZero,
    #[error("square root of a negative scalar")]
    NegativeRadicand,
    #[error("invalid quaternion literal: {0}")]
    Parse(String),
}
