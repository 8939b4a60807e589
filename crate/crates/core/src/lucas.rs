//! The sequences `F_n`, `L_n` attached to `X² - tX - 1`:
//! `F_0 = 0, F_1 = 1, L_0 = 2, L_1 = t`, both following `x_{n+2} = t·x_{n+1} + x_n`
//! for every integer `n`.
//!
//! Exact evaluation is generic over the integer type; modular evaluation
//! runs over `i128` residues of a 63-bit modulus.

use std::collections::BTreeMap;
use std::ops::Neg;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Num, ToPrimitive};

use crate::arith;
use crate::error::{domain, Error, Result};

/// Hard cap on the linear-scan fallback of [`period`].
pub const PERIOD_SCAN_CAP: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LucasPair<T> {
    pub t: T,
    pub n: i64,
    pub f: T,
    pub l: T,
}

/// Which of the two sequences a period refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Seq {
    F,
    L,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeriodResult {
    pub modulus: u64,
    pub sequence: Seq,
    pub period: u64,
}

/// `(F_n, F_{n+1})` for `n >= 0` by fast doubling, reducing every
/// intermediate through `reduce`.
///
/// Uses `F_{2k} = F_k(2F_{k+1} - tF_k)` and `F_{2k+1} = F_k² + F_{k+1}²`.
fn doubling<T, R>(t: &T, n: u64, reduce: R) -> (T, T)
where
    T: Clone + Num,
    R: Fn(T) -> T,
{
    let two = T::one() + T::one();
    let (mut a, mut b) = (T::zero(), T::one());
    for bit in (0..64 - n.leading_zeros()).rev() {
        let c = reduce(a.clone() * reduce(two.clone() * b.clone() - t.clone() * a.clone()));
        let d = reduce(a.clone() * a + b.clone() * b);
        if (n >> bit) & 1 == 1 {
            let next = reduce(t.clone() * d.clone() + c);
            a = d;
            b = next;
        } else {
            a = c;
            b = d;
        }
    }
    (a, b)
}

fn negative_index_signs<T: Neg<Output = T>>(n: u64, f: T, l: T) -> (T, T) {
    // F_{-n} = (-1)^{n+1} F_n, L_{-n} = (-1)^n L_n
    if n.is_multiple_of(2) {
        (-f, l)
    } else {
        (f, -l)
    }
}

/// Exact `(F_n, L_n)` for any integer `n`.
pub fn lucas_pair<T>(t: &T, n: i64) -> LucasPair<T>
where
    T: Clone + Num + Neg<Output = T>,
{
    let k = n.unsigned_abs();
    let (f, f_next) = doubling(t, k, |x| x);
    let two = T::one() + T::one();
    let l = two * f_next - t.clone() * f.clone();
    let (f, l) = if n < 0 { negative_index_signs(k, f, l) } else { (f, l) };
    LucasPair { t: t.clone(), n, f, l }
}

/// `(F_n mod m, L_n mod m)` in `O(log |n|)` ring operations.
pub fn lucas_pair_mod(t: &BigInt, n: i64, m: u64) -> Result<(u64, u64)> {
    if m < 2 {
        return domain(format!("modulus must be >= 2, got {m}"));
    }
    if m >= 1 << 63 {
        return domain("modulus must be below 2^63");
    }
    Ok(pair_mod_unchecked(&residue(t, m), n, m))
}

/// `(F_n mod m, L_n mod m)` for an arbitrary-precision modulus `m >= 2`.
pub fn lucas_pair_mod_big(t: &BigInt, n: i64, m: &BigInt) -> Result<(BigInt, BigInt)> {
    if *m < BigInt::from(2) {
        return domain(format!("modulus must be >= 2, got {m}"));
    }
    let t = t.mod_floor(m);
    let k = n.unsigned_abs();
    let (f, f_next) = doubling(&t, k, |x: BigInt| x.mod_floor(m));
    let l: BigInt = 2 * f_next - &t * &f;
    let l = l.mod_floor(m);
    let (f, l) = if n < 0 { negative_index_signs(k, f, l) } else { (f, l) };
    Ok((f.mod_floor(m), l.mod_floor(m)))
}

pub(crate) fn residue(t: &BigInt, m: u64) -> u64 {
    t.mod_floor(&BigInt::from(m)).to_u64().expect("residue below modulus")
}

/// Modular pair for a trace already reduced mod `m`.
pub(crate) fn pair_mod_unchecked(t_mod: &u64, n: i64, m: u64) -> (u64, u64) {
    let mi = m as i128;
    let t = *t_mod as i128;
    let k = n.unsigned_abs();
    let (f, f_next) = doubling(&t, k, |x: i128| x.rem_euclid(mi));
    let l = (2 * f_next - t * f).rem_euclid(mi);
    let (f, l) = if n < 0 { negative_index_signs(k, f, l) } else { (f, l) };
    (f.rem_euclid(mi) as u64, l.rem_euclid(mi) as u64)
}

/// Sequence state `(x_n, x_{n+1}) mod m`.
fn state(t_mod: u64, n: u64, m: u64, which: Seq) -> (u64, u64) {
    let (f0, l0) = pair_mod_unchecked(&t_mod, n as i64, m);
    let (f1, l1) = pair_mod_unchecked(&t_mod, n as i64 + 1, m);
    match which {
        Seq::F => (f0, f1),
        Seq::L => (l0, l1),
    }
}

/// A multiple of the period of `(F_n, F_{n+1}) mod m`, built from the
/// factorization of `m`: for a prime power `ℓ^e` the period divides
/// `ℓ^{e-1}` times `6` (ℓ = 2), `ℓ(ℓ-1)` (ℓ | t² + 4), `ℓ-1` (t² + 4 a square
/// mod ℓ) or `2(ℓ+1)` (a non-square). Returns `None` when `m` cannot be
/// factored.
fn period_bound(t_mod: u64, m: u64) -> Option<u64> {
    let primes = arith::prime_factors_u64(m)?;
    let mut bound = 1u64;
    for l in primes {
        let mut e = 0;
        let mut rest = m;
        while rest.is_multiple_of(l) {
            rest /= l;
            e += 1;
        }
        let base = if l == 2 {
            6
        } else {
            let d = (t_mod as u128 * t_mod as u128 + 4) % l as u128;
            if d == 0 {
                l.checked_mul(l - 1)?
            } else {
                match arith::jacobi_symbol(&(d as i128), &(l as i128)).ok()? {
                    1 => l - 1,
                    _ => 2 * (l + 1),
                }
            }
        };
        let lifted = base.checked_mul(l.checked_pow(e - 1)?)?;
        bound = bound.checked_mul(lifted / bound.gcd(&lifted))?;
    }
    Some(bound)
}

/// Least period of `F` or `L` modulo `m`.
///
/// The periods of a purely periodic sequence form a subgroup of `Z`, so the
/// least one is found by stripping prime factors from a known multiple.
/// Falls back to a linear scan (capped at [`PERIOD_SCAN_CAP`]) when `m`
/// cannot be factored.
pub fn period(t: &BigInt, m: u64, which: Seq) -> Result<PeriodResult> {
    if m < 2 {
        return domain(format!("modulus must be >= 2, got {m}"));
    }
    if m >= 1 << 62 {
        return domain("modulus must be below 2^62");
    }
    let t_mod = residue(t, m);
    let init = state(t_mod, 0, m, which);
    let period = match period_bound(t_mod, m) {
        Some(bound) if state(t_mod, bound, m, which) == init => {
            let mut p = bound;
            let factors = arith::prime_factors_u64(bound)
                .ok_or_else(|| Error::Internal(format!("cannot factor period bound {bound}")))?;
            for r in factors {
                while p % r == 0 && state(t_mod, p / r, m, which) == init {
                    p /= r;
                }
            }
            p
        }
        Some(bound) => return Err(Error::Internal(format!("period bound {bound} mod {m} is not a period"))),
        None => linear_period(t_mod, m, which)?,
    };
    Ok(PeriodResult { modulus: m, sequence: which, period })
}

fn linear_period(t_mod: u64, m: u64, which: Seq) -> Result<u64> {
    let init = state(t_mod, 0, m, which);
    let (mut x, mut y) = init;
    for k in 1..=PERIOD_SCAN_CAP {
        let z = ((t_mod as u128 * y as u128 + x as u128) % m as u128) as u64;
        x = y;
        y = z;
        if (x, y) == init {
            return Ok(k);
        }
    }
    Err(Error::Resource(format!("period mod {m} exceeds {PERIOD_SCAN_CAP} steps")))
}

/// Which identity a [`Violation`] refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Identity {
    /// `F_{2n+1} = F_{n+1}² + F_n²`
    OddIndexSquares,
    /// `b²p(F_n² - F_{n+1}²) = -t·L_{2n+1} - 4(-1)^n`
    SquareDifference,
    /// `b²p·F_n·F_{n+1} = L_{2n+1} - (-1)^n t`
    AdjacentProduct,
    /// `L_n² - b²p·F_n² = 4(-1)^n`
    NormEquation,
    /// `F_{n+m} = F_n F_{m+1} + F_{n-1} F_m`
    AdditionFormula,
    /// `L_{n+m} - (-1)^m L_{n-m} = b²p·F_n F_m`
    CompanionAddition,
    /// `F_{-n} = (-1)^{n+1} F_n`
    NegativeIndexF,
    /// `L_{-n} = (-1)^n L_n`
    NegativeIndexL,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub identity: Identity,
    pub n: i64,
    pub m: Option<i64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct IdentityReport {
    pub checks: BTreeMap<Identity, u64>,
    pub violations: Vec<Violation>,
}

impl IdentityReport {
    pub fn total_checks(&self) -> u64 {
        self.checks.values().sum()
    }

    pub fn is_clean(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, identity: Identity, ok: bool, n: i64, m: Option<i64>) {
        *self.checks.entry(identity).or_default() += 1;
        if !ok {
            self.violations.push(Violation { identity, n, m });
        }
    }
}

/// Values of both sequences over a contiguous index window, filled by the
/// plain recurrence in both directions.
struct Table<T> {
    offset: i64,
    f: Vec<T>,
    l: Vec<T>,
}

impl<T: Clone + Num> Table<T> {
    fn new(t: &T, lo: i64, hi: i64) -> Self {
        let lo = lo.min(0);
        let hi = hi.max(1);
        let len = (hi - lo + 1) as usize;
        let zero_at = (-lo) as usize;
        let mut f = vec![T::zero(); len];
        let mut l = vec![T::zero(); len];
        f[zero_at] = T::zero();
        f[zero_at + 1] = T::one();
        l[zero_at] = T::one() + T::one();
        l[zero_at + 1] = t.clone();
        for i in zero_at + 2..len {
            f[i] = t.clone() * f[i - 1].clone() + f[i - 2].clone();
            l[i] = t.clone() * l[i - 1].clone() + l[i - 2].clone();
        }
        for i in (0..zero_at).rev() {
            f[i] = f[i + 2].clone() - t.clone() * f[i + 1].clone();
            l[i] = l[i + 2].clone() - t.clone() * l[i + 1].clone();
        }
        Table { offset: lo, f, l }
    }

    fn f(&self, n: i64) -> &T {
        &self.f[(n - self.offset) as usize]
    }

    fn l(&self, n: i64) -> &T {
        &self.l[(n - self.offset) as usize]
    }
}

fn sign<T: Num + Neg<Output = T>>(n: i64) -> T {
    if n.rem_euclid(2) == 0 {
        T::one()
    } else {
        -T::one()
    }
}

/// Checks the doubling identities, the norm equation, both addition
/// formulas and the negative-index sign laws exactly over the given ranges.
///
/// `t`, `b`, `p` must come from a fundamental unit (`t² + 4 = b²p`).
pub fn identity_suite<T>(
    t: &T,
    b: &T,
    p: &T,
    n_range: std::ops::RangeInclusive<i64>,
    m_range: std::ops::RangeInclusive<i64>,
) -> IdentityReport
where
    T: Clone + Num + Neg<Output = T> + PartialEq,
{
    let (n_lo, n_hi) = (*n_range.start(), *n_range.end());
    let (m_lo, m_hi) = (*m_range.start(), *m_range.end());
    let reach = [n_lo, n_hi, m_lo, m_hi].iter().map(|v| v.abs()).max().unwrap_or(0);
    let table = Table::new(t, -2 * reach - 3, 2 * reach + 3);
    let d = b.clone() * b.clone() * p.clone();
    let four = T::one() + T::one() + T::one() + T::one();
    let mut report = IdentityReport::default();

    for n in n_range.clone() {
        let (fn0, fn1) = (table.f(n).clone(), table.f(n + 1).clone());
        let l_odd = table.l(2 * n + 1).clone();
        let s: T = sign(n);

        let lhs = fn1.clone() * fn1.clone() + fn0.clone() * fn0.clone();
        report.record(Identity::OddIndexSquares, *table.f(2 * n + 1) == lhs, n, None);

        let lhs = d.clone() * (fn0.clone() * fn0.clone() - fn1.clone() * fn1.clone());
        let rhs = -(t.clone() * l_odd.clone()) - four.clone() * s.clone();
        report.record(Identity::SquareDifference, lhs == rhs, n, None);

        let lhs = d.clone() * fn0.clone() * fn1.clone();
        let rhs = l_odd - s.clone() * t.clone();
        report.record(Identity::AdjacentProduct, lhs == rhs, n, None);

        let ln = table.l(n).clone();
        let lhs = ln.clone() * ln - d.clone() * fn0.clone() * fn0.clone();
        report.record(Identity::NormEquation, lhs == four.clone() * s, n, None);

        let neg_f = table.f(-n).clone() == sign::<T>(n + 1) * fn0.clone();
        report.record(Identity::NegativeIndexF, neg_f, n, None);
        let neg_l = table.l(-n).clone() == sign::<T>(n) * table.l(n).clone();
        report.record(Identity::NegativeIndexL, neg_l, n, None);

        for m in m_range.clone() {
            let lhs = table.f(n + m).clone();
            let rhs =
                table.f(n).clone() * table.f(m + 1).clone() + table.f(n - 1).clone() * table.f(m).clone();
            report.record(Identity::AdditionFormula, lhs == rhs, n, Some(m));

            let lhs = table.l(n + m).clone() - sign::<T>(m) * table.l(n - m).clone();
            let rhs = d.clone() * table.f(n).clone() * table.f(m).clone();
            report.record(Identity::CompanionAddition, lhs == rhs, n, Some(m));
        }
    }
    report
}

/// Checks that `p^ν | F_n` for an index `n` divisible by `p^ν`.
pub fn valuation_law_check(t: &BigInt, p: u64, nu: u32, n: i64) -> Result<bool> {
    if nu == 0 {
        return domain("exponent must be >= 1");
    }
    let modulus = p
        .checked_pow(nu)
        .filter(|&m| m < 1 << 62)
        .ok_or_else(|| Error::Domain(format!("{p}^{nu} is too large")))?;
    if n.rem_euclid(modulus as i64) != 0 {
        return domain(format!("{p}^{nu} does not divide n = {n}"));
    }
    let (f, _) = lucas_pair_mod(t, n, modulus)?;
    Ok(f == 0)
}

/// `F_n` as an exact integer, for callers that only need one sequence.
pub fn f_exact(t: &BigInt, n: i64) -> BigInt {
    lucas_pair(t, n).f
}
