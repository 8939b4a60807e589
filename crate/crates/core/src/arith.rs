//! Exact integer substrate: primality, Jacobi symbols, sums of two squares
//! and square-free parts.

use num_bigint::{BigInt, Sign};
use num_integer::{Integer, Roots};
use num_traits::{FromPrimitive, One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};

/// Default trial-division bound for [`squarefree_part`].
pub const DEFAULT_TRIAL_BOUND: u64 = 1_000_000;

/// Primes below this use the brute-force two-squares search.
const BRUTE_FORCE_TWO_SQUARES: u64 = 1_000_000;

pub(crate) fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub(crate) fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn miller_rabin_witness(n: u64, d: u64, s: u32, a: u64) -> bool {
    let mut x = pow_mod(a, d, n);
    if x == 1 || x == n - 1 {
        return false;
    }
    for _ in 1..s {
        x = mul_mod(x, x, n);
        if x == n - 1 {
            return false;
        }
    }
    true
}

/// Deterministic primality test for 64-bit integers.
///
/// The first twelve primes as Miller-Rabin bases are a proven witness set
/// for all `n < 3.3·10²⁴`.
pub fn is_prime(n: u64) -> Result<bool> {
    if n < 2 {
        return domain(format!("is_prime requires n >= 2, got {n}"));
    }
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    for &p in &BASES {
        if n == p {
            return Ok(true);
        }
        if n.is_multiple_of(p) {
            return Ok(false);
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    Ok(!BASES.iter().any(|&a| miller_rabin_witness(n, d, s, a)))
}

/// `is_prime` for callers that already know `n >= 2` or treat `n < 2` as composite.
pub(crate) fn prime(n: u64) -> bool {
    n >= 2 && is_prime(n).unwrap_or(false)
}

/// Jacobi symbol `(a/n)` for odd positive `n`.
pub fn jacobi_symbol<T>(a: &T, n: &T) -> Result<i8>
where
    T: Integer + Signed + Clone + FromPrimitive,
{
    if !n.is_positive() || n.is_even() {
        return domain("jacobi symbol needs an odd positive modulus");
    }
    let c = |v: u8| T::from_u8(v).expect("small constant");
    let (three, four, five, eight) = (c(3), c(4), c(5), c(8));
    let mut a = a.mod_floor(n);
    let mut n = n.clone();
    let mut result = 1i8;
    while !a.is_zero() {
        while a.is_even() {
            a = a / c(2);
            let r = n.mod_floor(&eight);
            if r == three || r == five {
                result = -result;
            }
        }
        std::mem::swap(&mut a, &mut n);
        if a.mod_floor(&four) == three && n.mod_floor(&four) == three {
            result = -result;
        }
        a = a.mod_floor(&n);
    }
    Ok(if n.is_one() { result } else { 0 })
}

/// `p = a² + b²` normalized so that `a ≡ -1 (mod 4)`, `b` is even and
/// `p | a·t + 2b`, together with the integers `x0`, `y0` satisfying
/// `2p·x0² = bp + (at + 2b)` and `2p·y0² = bp - (at + 2b)` (here `bp` is the
/// unit coefficient times `p`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TwoSquares {
    pub p: u64,
    /// Trace of the fundamental unit used for the sign normalization.
    pub trace: BigInt,
    /// Coefficient of `√p` in the fundamental unit.
    pub unit_b: BigInt,
    pub a: i64,
    pub b: i64,
    pub x0: BigInt,
    pub y0: BigInt,
}

impl TwoSquares {
    /// `a·t + 2b`.
    pub fn at_plus_2b(&self) -> BigInt {
        BigInt::from(self.a) * &self.trace + 2 * self.b
    }

    /// `b·t - 2a`.
    pub fn bt_minus_2a(&self) -> BigInt {
        BigInt::from(self.b) * &self.trace - 2 * self.a
    }
}

fn odd_even_split(p: u64) -> Result<(u64, u64)> {
    if p < BRUTE_FORCE_TWO_SQUARES {
        let r = p.sqrt();
        for a in 1..=r {
            let rest = p - a * a;
            let b = rest.sqrt();
            if b * b == rest {
                return Ok(if a % 2 == 1 { (a, b) } else { (b, a) });
            }
        }
        return Err(Error::Internal(format!("{p} is not a sum of two squares")));
    }
    let (a, b) = cornacchia(p)?;
    Ok(if a % 2 == 1 { (a, b) } else { (b, a) })
}

/// Cornacchia's algorithm for `x² + y² = p`, `p ≡ 1 (mod 4)` prime.
fn cornacchia(p: u64) -> Result<(u64, u64)> {
    let half = (p - 1) / 4;
    let root = (2..p)
        .find_map(|g| if pow_mod(g, (p - 1) / 2, p) == p - 1 { Some(pow_mod(g, half, p)) } else { None })
        .ok_or_else(|| Error::Internal(format!("no quadratic non-residue mod {p}")))?;
    let bound = p.sqrt();
    let (mut r0, mut r1) = (p, root.max(p - root));
    while r1 > bound {
        let r2 = r0 % r1;
        r0 = r1;
        r1 = r2;
    }
    let rest = p - r1 * r1;
    let y = rest.sqrt();
    if y * y != rest {
        return Err(Error::Internal(format!("Cornacchia failed for {p}")));
    }
    Ok((r1, y))
}

/// Integer square root of a non-negative `BigInt` when it is a perfect square.
pub(crate) fn exact_sqrt(n: &BigInt) -> Option<BigInt> {
    if n.is_negative() {
        return None;
    }
    let r = n.sqrt();
    (&r * &r == *n).then_some(r)
}

/// Normalized two-squares decomposition of `p` relative to the unit trace `t`.
///
/// The odd part `a` is fixed by `a ≡ -1 (mod 4)`; exactly one sign of `b`
/// makes `p | at + 2b`. When `bt - 2a = 0` the sign of `y0` is not
/// determined by `x0·y0 = (bt - 2a)/2p` and is taken positive.
pub fn two_squares(p: u64, t: &BigInt) -> Result<TwoSquares> {
    if p % 8 != 5 {
        return domain(format!("two_squares needs p ≡ 5 (mod 8), got {p}"));
    }
    let pb = BigInt::from(p);
    let disc: BigInt = t * t + 4;
    if !disc.mod_floor(&pb).is_zero() {
        return domain(format!("t² + 4 is not divisible by {p}"));
    }
    let unit_b = exact_sqrt(&(&disc / &pb))
        .ok_or_else(|| Error::Domain(format!("(t² + 4)/{p} is not a perfect square")))?;

    let (odd, even) = odd_even_split(p)?;
    let a = if odd % 4 == 3 { odd as i64 } else { -(odd as i64) };
    let candidates = [even as i64, -(even as i64)];
    let dividing: Vec<i64> = candidates
        .iter()
        .copied()
        .filter(|&b| (BigInt::from(a) * t + 2 * b).mod_floor(&pb).is_zero())
        .collect();
    let b = match dividing.as_slice() {
        [b] => *b,
        _ => {
            return Err(Error::Internal(format!(
                "expected exactly one sign of b with {p} | at + 2b, found {}",
                dividing.len()
            )))
        }
    };

    let s = BigInt::from(a) * t + 2 * b;
    let bp = &unit_b * &pb;
    let two_p = BigInt::from(2 * p);
    let (xq, xr) = (&bp + &s).div_rem(&two_p);
    let (yq, yr) = (&bp - &s).div_rem(&two_p);
    if !xr.is_zero() || !yr.is_zero() {
        return Err(Error::Internal("x0², y0² are not integers".into()));
    }
    let x0 = exact_sqrt(&xq).ok_or_else(|| Error::Internal("x0² is not a square".into()))?;
    let y_abs = exact_sqrt(&yq).ok_or_else(|| Error::Internal("y0² is not a square".into()))?;
    let cross = BigInt::from(b) * t - 2 * a;
    let y0 = if cross.is_negative() { -y_abs } else { y_abs };

    Ok(TwoSquares { p, trace: t.clone(), unit_b, a, b, x0, y0 })
}

/// `input = s·root²` with `s` square-free and `sign(s) = sign(input)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SquarefreeDecomp {
    pub s: BigInt,
    pub root: BigInt,
}

/// Prime factorization by trial division up to `bound`.
///
/// Returns the `(prime, exponent)` pairs found and the remaining cofactor,
/// which has no prime factor `<= bound`.
pub fn trial_factor(n: &BigInt, bound: u64) -> (Vec<(u64, u32)>, BigInt) {
    let mut rest = n.abs();
    let mut factors = Vec::new();
    let mut d = 2u64;
    let mut exhausted = false;
    while d <= bound {
        let db = BigInt::from(d);
        if &db * &db > rest {
            exhausted = true;
            break;
        }
        let mut e = 0;
        loop {
            let (q, r) = rest.div_rem(&db);
            if !r.is_zero() {
                break;
            }
            rest = q;
            e += 1;
        }
        if e > 0 {
            factors.push((d, e));
        }
        d += if d == 2 { 1 } else { 2 };
    }
    // no divisor <= sqrt(rest) remains, so rest is prime
    if exhausted && rest > BigInt::one() {
        if let Some(r) = rest.to_u64() {
            factors.push((r, 1));
            rest = BigInt::one();
        }
    }
    (factors, rest)
}

/// Square-free part with the default trial-division bound.
pub fn squarefree_part(a: &BigInt) -> Result<SquarefreeDecomp> {
    squarefree_part_with_bound(a, DEFAULT_TRIAL_BOUND)
}

/// Square-free part of a nonzero integer.
///
/// After trial division to `bound`, the cofactor must be `1`, a prime (proven
/// when it is below `bound²` or fits a deterministic 64-bit test) or a perfect
/// square; otherwise the decomposition cannot be certified and
/// [`Error::Unfactored`] is returned.
pub fn squarefree_part_with_bound(a: &BigInt, bound: u64) -> Result<SquarefreeDecomp> {
    if a.is_zero() {
        return domain("squarefree_part of 0");
    }
    let (factors, cofactor) = trial_factor(a, bound);
    let mut s = BigInt::one();
    let mut root = BigInt::one();
    for (prime, e) in factors {
        if e % 2 == 1 {
            s *= prime;
        }
        root *= BigInt::from(prime).pow(e / 2);
    }
    if !cofactor.is_one() {
        let bound_sq = BigInt::from(bound) * BigInt::from(bound);
        let certified_prime = cofactor < bound_sq || cofactor.to_u64().map(prime).unwrap_or(false);
        if certified_prime {
            s *= &cofactor;
        } else if let Some(r) = exact_sqrt(&cofactor) {
            root *= r;
        } else {
            return Err(Error::Unfactored { cofactor: cofactor.to_string(), bound });
        }
    }
    if a.sign() == Sign::Minus {
        s = -s;
    }
    Ok(SquarefreeDecomp { s, root })
}

/// Distinct prime factors of a 64-bit integer; `None` if some factor above
/// the trial bound cannot be proven prime.
pub(crate) fn prime_factors_u64(n: u64) -> Option<Vec<u64>> {
    let (factors, rest) = trial_factor(&BigInt::from(n), DEFAULT_TRIAL_BOUND);
    let mut primes: Vec<u64> = factors.into_iter().map(|(p, _)| p).collect();
    if !rest.is_one() {
        let r = rest.to_u64()?;
        if !prime(r) {
            return None;
        }
        primes.push(r);
    }
    Some(primes)
}
