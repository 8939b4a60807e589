//! Fundamental unit of `Q(√p)` for primes `p ≡ 5 (mod 8)`.

use num_bigint::BigInt;
use num_integer::Roots;
use num_traits::{One, Zero};

use crate::arith;
use crate::error::{domain, Error, Result};

/// The fundamental unit `(t + b√p)/2 > 1`; its norm is `-1`, so `t² + 4 = b²p`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FundamentalUnit {
    pub p: u64,
    pub t: BigInt,
    pub b: BigInt,
}

impl FundamentalUnit {
    /// `b²p`, the discriminant `t² + 4` of `X² - tX - 1`.
    pub fn discriminant(&self) -> BigInt {
        &self.b * &self.b * self.p
    }

    /// Checks `t² + 4 = b²p` with `t, b > 0`.
    pub fn is_valid(&self) -> bool {
        self.t > BigInt::zero() && self.b > BigInt::zero() && &self.t * &self.t + 4 == self.discriminant()
    }
}

/// Fundamental unit of `Q(√p)`.
///
/// Expands `ω = (1 + √p)/2` as a continued fraction with exact state
/// `(P + √p)/Q`. The first convergent `h/k` with `N(h - kω) = ±1` gives the
/// fundamental unit `h - kω̄ = ((2h - k) + k√p)/2`.
pub fn fundamental_unit(p: u64) -> Result<FundamentalUnit> {
    if p % 8 != 5 {
        return domain(format!("fundamental_unit needs p ≡ 5 (mod 8), got {p}"));
    }
    if !arith::prime(p) {
        return domain(format!("{p} is not prime"));
    }
    let root = p.sqrt() as i64;
    let pi = p as i64;
    let quarter = BigInt::from((p - 1) / 4);

    let (mut big_p, mut big_q) = (1i64, 2i64);
    let start = (big_p, big_q);
    let (mut h_prev, mut h) = (BigInt::zero(), BigInt::one());
    let (mut k_prev, mut k) = (BigInt::one(), BigInt::zero());
    loop {
        let a = (big_p + root) / big_q;
        let h_next = a * &h + &h_prev;
        let k_next = a * &k + &k_prev;
        h_prev = std::mem::replace(&mut h, h_next);
        k_prev = std::mem::replace(&mut k, k_next);

        let norm = &h * &h - &h * &k - &k * &k * &quarter;
        if norm == BigInt::one() || norm == -BigInt::one() {
            if norm.is_one() {
                return Err(Error::Internal(format!("unit of norm +1 found first for p = {p}")));
            }
            let unit = FundamentalUnit { p, t: 2 * &h - &k, b: k };
            if !unit.is_valid() {
                return Err(Error::Internal(format!("invalid unit for p = {p}")));
            }
            return Ok(unit);
        }

        big_p = a * big_q - big_p;
        big_q = (pi - big_p * big_p) / big_q;
        if (big_p, big_q) == start {
            return Err(Error::Internal(format!(
                "continued fraction period closed without a unit for p = {p}"
            )));
        }
    }
}
