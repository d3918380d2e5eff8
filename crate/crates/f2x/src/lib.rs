//! Exact arithmetic over `F2[x]` and its completion at infinity, together with
//! the character-sum, sieve-weight, and extremal-set machinery built on top of it.
//!
//! Everything is exact: polynomials are bit vectors, all weights and transforms
//! use arbitrary-precision rationals ([`Rat`]), and additive characters take
//! values in `{+1, -1}`. No floating point enters any computation.
//!
//! Module map:
//! - [`poly`]: bit-packed polynomials over `F2`, parsing/printing, gcd, inverses.
//! - [`arith`]: irreducibility, prime enumeration (cached sieve), multiplicative
//!   functions (`mu`, `phi`, `tau`, the prime-degree weight).
//! - [`laurent`]: Laurent-tail windows at the infinite place, torus points
//!   (fractions mod 1), the additive character, rational approximation.
//! - [`fourier`]: residue tables, exact DFT/inverse DFT, the fast transform for
//!   modulus `x^N`, Ramanujan sums, geometric character sums.
//! - [`sieve`]: one-prime local weights, their products, truncated expansions,
//!   and the coefficient tables driving them.
//! - [`beta`]: Fourier coefficients of the combined sieve weight, in closed form
//!   and via the transform oracle, plus the truncated convolution.
//! - [`vdc`]: the difference-set harness — weighted exponential sums, closed
//!   forms, grid scans, positivity certificates.
//! - [`extremal`]: exact and heuristic search for large sets whose difference
//!   set avoids shifted primes.

pub mod arith;
pub mod beta;
pub mod extremal;
pub mod fourier;
pub mod laurent;
pub mod poly;
pub mod sieve;
pub mod vdc;

use num_bigint::BigInt;
use num_traits::One;

pub use poly::{Degree, Poly2};

/// Exact rational scalar used throughout the crate.
pub type Rat = num_rational::BigRational;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    #[error("zero denominator")]
    ZeroDenominator,
    #[error("{a} is not invertible mod {modulus}: gcd = {gcd}")]
    NotInvertible { a: Poly2, modulus: Poly2, gcd: Poly2 },
    #[error("window floor {floor} is too shallow: operation needs exponent {needed}")]
    Precision { needed: i64, floor: i64 },
    #[error("{what}: cost guard allows at most {limit}, got {requested}")]
    CostGuard { what: &'static str, limit: u64, requested: u64 },
    #[error("invalid parameters: {0}")]
    Params(String),
    #[error("smoothed weight sum has non-positive denominator (positivity failure)")]
    NonPositiveDenominator,
    #[error("element outside G_{n}: {element}")]
    OutsideGn { element: Poly2, n: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

// ---- Small rational helpers used across modules ----

/// `n` as an exact rational.
pub fn rat_int(n: i64) -> Rat {
    Rat::from_integer(BigInt::from(n))
}

/// `n/d` as an exact rational (`d != 0`).
pub fn rat(n: i64, d: i64) -> Rat {
    assert!(d != 0, "zero denominator");
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `2^k` as a big integer (`k >= 0`).
pub fn pow2(k: u64) -> BigInt {
    BigInt::one() << k
}

/// `2^k` as an exact rational, `k` may be negative.
pub fn pow2_rat(k: i64) -> Rat {
    if k >= 0 {
        Rat::from_integer(pow2(k as u64))
    } else {
        Rat::new(BigInt::one(), pow2((-k) as u64))
    }
}
