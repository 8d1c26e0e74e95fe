//! Randomized zero-testing for sqrt(W) expressions.
//!
//! An expression p + r sqrt(W) with p, r rational functions over the 12
//! indeterminates vanishes identically iff p and r both vanish (sqrt(W) is
//! not rational over the coefficient field). Sampling both parts at random
//! rational points gives a one-sided Schwartz-Zippel test: a nonzero
//! polynomial of total degree d over a sample space of ~2e12 points per
//! variable survives one sample with probability < d / 2e12, so twenty
//! samples of the degree <= 12 numerators miss with probability far below
//! 1e-6. The test is deterministic for a fixed seed.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::poly::NVARS;
use super::sqrtw::SqrtWExpr;
use super::AlgebraError;

/// Retries per sample before giving up on finding a point where every
/// denominator is nonzero.
const MAX_RETRIES: u32 = 64;

pub(crate) fn random_rational(rng: &mut ChaCha8Rng) -> BigRational {
    let num: i64 = rng.gen_range(-1_000_000..=1_000_000);
    let den: i64 = rng.gen_range(1..=1_000_000);
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Returns Ok(true) when every sampled point annihilates both the plain and
/// the radical part, Ok(false) as soon as one point does not. Points where a
/// denominator vanishes are re-drawn; `SamplingFailed` is returned if no
/// usable point is found within the retry budget.
pub fn poly_identity_test(
    expr: &SqrtWExpr,
    seed: u64,
    samples: u32,
) -> Result<bool, AlgebraError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let mut done = false;
        for _ in 0..MAX_RETRIES {
            let point: [BigRational; NVARS] = std::array::from_fn(|_| random_rational(&mut rng));
            if expr.plain.den.eval(&point).is_zero() || expr.radical.den.eval(&point).is_zero() {
                continue;
            }
            if !expr.plain.num.eval(&point).is_zero() || !expr.radical.num.eval(&point).is_zero() {
                return Ok(false);
            }
            done = true;
            break;
        }
        if !done {
            return Err(AlgebraError::SamplingFailed);
        }
    }
    Ok(true)
}
