//! Class numbers of imaginary quadratic fields by counting reduced binary
//! quadratic forms, and fundamental discriminants of `Q(√D)`.
//!
//! Only the quadratic subfields are handled. Class numbers of the
//! degree-`(p-1)/2` fields `k0(√D)` would need general number-field
//! machinery and are not computed.

use num_bigint::BigInt;
use num_integer::{Integer, Roots};
use num_traits::{Signed, ToPrimitive, Zero};

use crate::arith::{self, squarefree_part};
use crate::error::{domain, Error, Result};
use crate::family;

/// Largest `|disc|` accepted by [`class_number`].
pub const MAX_CLASS_NUMBER_DISC: u64 = 1_000_000_000;

fn is_squarefree_u64(n: u64) -> bool {
    let mut rest = n;
    let mut d = 2u64;
    while d * d <= rest {
        if rest.is_multiple_of(d * d) {
            return false;
        }
        if rest.is_multiple_of(d) {
            rest /= d;
        }
        d += 1;
    }
    true
}

/// Whether a negative integer is a fundamental discriminant.
pub fn is_fundamental(disc: i64) -> bool {
    if disc >= 0 {
        return false;
    }
    let n = disc.unsigned_abs();
    match disc.rem_euclid(4) {
        1 => is_squarefree_u64(n),
        0 => {
            let m = disc / 4;
            matches!(m.rem_euclid(4), 2 | 3) && is_squarefree_u64(m.unsigned_abs())
        }
        _ => false,
    }
}

/// Number of reduced forms `(a, b, c)` with `b² - 4ac = disc`.
pub fn class_number(disc: i64) -> Result<u64> {
    if disc >= 0 {
        return domain(format!("discriminant must be negative, got {disc}"));
    }
    if disc.unsigned_abs() > MAX_CLASS_NUMBER_DISC {
        return domain(format!("|disc| exceeds {MAX_CLASS_NUMBER_DISC}"));
    }
    if !is_fundamental(disc) {
        return domain(format!("{disc} is not a fundamental discriminant"));
    }
    let n = disc.unsigned_abs();
    let a_max = (n / 3).sqrt();
    let mut h = 0u64;
    for a in 1..=a_max as i64 {
        let mut b = -a + 1;
        if (b - disc).rem_euclid(2) != 0 {
            b += 1;
        }
        while b <= a {
            let num = b * b - disc;
            if num % (4 * a) == 0 {
                let c = num / (4 * a);
                if c > a || (c == a && b >= 0) {
                    h += 1;
                }
            }
            b += 2;
        }
    }
    Ok(h)
}

/// `s` or `4s` for the square-free part `s` of `d`.
pub fn fundamental_discriminant(d: &BigInt) -> Result<BigInt> {
    if d.is_zero() {
        return domain("discriminant of Q(√0) is undefined");
    }
    let s = squarefree_part(d)?.s;
    if s == BigInt::from(1) {
        return domain(format!("{d} is a square"));
    }
    Ok(if s.mod_floor(&BigInt::from(4)) == BigInt::from(1) { s } else { 4 * s })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ImagQuadField {
    pub d_input: BigInt,
    pub fundamental_discriminant: BigInt,
    pub class_number: Option<u64>,
}

impl ImagQuadField {
    /// `Q(√d)` for negative `d`; the class number is computed when the
    /// fundamental discriminant is within `budget`.
    pub fn new(d: &BigInt, budget: u64) -> Result<Self> {
        if !d.is_negative() {
            return domain(format!("{d} is not negative"));
        }
        let fd = fundamental_discriminant(d)?;
        let class_number = match fd.abs().to_u64() {
            Some(n) if n <= budget.min(MAX_CLASS_NUMBER_DISC) => {
                Some(class_number(fd.to_i64().expect("small discriminant"))?)
            }
            _ => None,
        };
        Ok(ImagQuadField { d_input: d.clone(), fundamental_discriminant: fd, class_number })
    }
}

/// Per-field outcome of [`divisibility_probe`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Verdict {
    Divisible {
        h: u64,
        disc: BigInt,
    },
    NotDivisible {
        h: u64,
        disc: BigInt,
    },
    /// The fundamental discriminant exceeds the budget or could not be computed.
    Infeasible,
    /// `Q(√d)` is not an imaginary quadratic field (`d` positive or a square).
    NotImaginary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ProbeReport {
    pub d: BigInt,
    pub for_d: Verdict,
    pub for_pd: Verdict,
}

fn verdict(d: &BigInt, p: u64, budget: u64) -> Verdict {
    if !d.is_negative() {
        return Verdict::NotImaginary;
    }
    match ImagQuadField::new(d, budget) {
        Ok(ImagQuadField { class_number: Some(h), fundamental_discriminant, .. }) => {
            if h % p == 0 {
                Verdict::Divisible { h, disc: fundamental_discriminant }
            } else {
                Verdict::NotDivisible { h, disc: fundamental_discriminant }
            }
        }
        Ok(_) | Err(Error::Unfactored { .. }) | Err(Error::Resource(_)) => Verdict::Infeasible,
        Err(_) => Verdict::NotImaginary,
    }
}

/// Whether `p` divides the class numbers of `Q(√D_{m,n})` and
/// `Q(√(p·D_{m,n}))`.
///
/// A diagnostic on the quadratic subfields only: divisibility there is not
/// implied by the construction.
pub fn divisibility_probe(
    p: u64,
    t: &BigInt,
    b: &BigInt,
    m: i64,
    n: i64,
    budget: u64,
) -> Result<ProbeReport> {
    let d = family::d_value(t, b, m, n)?;
    let pd = &d * p;
    if !arith::prime(p) {
        return domain(format!("{p} is not prime"));
    }
    Ok(ProbeReport { for_d: verdict(&d, p, budget), for_pd: verdict(&pd, p, budget), d })
}
