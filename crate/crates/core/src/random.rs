//! Seeded generators for rational scalars and quaternions.
//!
//! Every draw in a seeded run comes from a ChaCha8 stream: sample `i` of a
//! run with seed `s` reads stream `i` of the generator keyed by `s`, so the
//! values do not depend on how samples are split across workers.

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::quaternion::Quaternion;

/// Generator for sample number `index` of a run keyed by `seed`.
pub fn substream(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// `p/q` with `|p| ≤ bound` and `1 ≤ q ≤ bound`.
pub fn rational<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> BigRational {
    let bound = bound.max(1) as i64;
    let p = rng.gen_range(-bound..=bound);
    let q = rng.gen_range(1..=bound);
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

pub fn nonzero_rational<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> BigRational {
    loop {
        let r = rational(rng, bound);
        if r != BigRational::from_integer(0.into()) {
            return r;
        }
    }
}

pub fn quaternion<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Quaternion {
    Quaternion::from_rationals(rational(rng, bound), rational(rng, bound), rational(rng, bound), rational(rng, bound))
}

pub fn nonzero_quaternion<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Quaternion {
    loop {
        let q = quaternion(rng, bound);
        if !q.is_zero() {
            return q;
        }
    }
}

pub fn vector<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Quaternion {
    Quaternion::from_rationals(
        BigRational::from_integer(0.into()),
        rational(rng, bound),
        rational(rng, bound),
        rational(rng, bound),
    )
}

pub fn nonzero_vector<R: Rng + ?Sized>(rng: &mut R, bound: u32) -> Quaternion {
    loop {
        let v = vector(rng, bound);
        if !v.is_zero() {
            return v;
        }
    }
}

pub fn tuple<R: Rng + ?Sized>(rng: &mut R, len: usize, bound: u32) -> Vec<Quaternion> {
    (0..len).map(|_| quaternion(rng, bound)).collect()
}
