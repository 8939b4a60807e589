//! Lucas-sequence construction of pairs of imaginary cyclic fields of degree
//! `(p-1)/2` whose class numbers are both divisible by `p`, for primes
//! `p ≡ 5 (mod 8)`.
//!
//! The crate computes the fundamental unit `(t + b√p)/2` of `Q(√p)`, the
//! sequences `F_n`, `L_n` attached to `X² - tX - 1`, and the congruence and
//! finite-field conditions that certify a residue class `(m0, n0)` together
//! with an auxiliary prime `q`. Supporting modules check the Gauss/Jacobi-sum
//! identities, the point-count lemma for the curves used in the existence
//! argument, and class numbers of small imaginary quadratic fields.
//!
//! Exact integer code is generic over the integer type (any
//! `num_integer::Integer`); the aliases below fix the types used throughout
//! the pipeline.

pub mod arith;
pub mod charsums;
pub mod classgroup;
pub mod curves;
pub mod error;
pub mod family;
pub mod ffield;
pub mod lucas;
pub mod realquad;

pub use error::{Error, Result};

/// Arbitrary-precision integer used for every exact quantity.
pub type Int = num_bigint::BigInt;

/// Exact sequence values.
pub type LucasPairInt = lucas::LucasPair<Int>;

/// Jacobi sums live in `Z[i]` with small coordinates (`|re|, |im| ≤ √p`).
pub type GaussianI64 = charsums::GaussianInt<i64>;

/// Gauss sums evaluated in double precision.
pub type GaussSumReportF64 = charsums::GaussSumReport<f64>;
