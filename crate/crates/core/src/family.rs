//! The family `α(m, n) = (L_n L_m + (L_m F_n - 2F_m)·b√p)/2`, its quartic
//! `X⁴ - TX³ + (N+2)X² - TX + 1`, the discriminants `D_{m,n}`, the residue
//! conditions certifying a class `(m0, n0)` with an auxiliary prime `q`, and
//! the search over residue classes.

use std::collections::{BTreeMap, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::arith::{self, exact_sqrt};
use crate::error::{domain, Error, Result};
use crate::ffield::{self, FieldElem, FieldTower};
use crate::lucas::{self, Seq};
use crate::realquad::{self, FundamentalUnit};

/// Default cap on `(m, n)` grid cells examined per auxiliary prime.
pub const DEFAULT_SCAN_BOUND: u64 = 100_000_000;

fn require_odd(name: &str, v: i64) -> Result<()> {
    if v.rem_euclid(2) != 1 {
        return domain(format!("{name} must be odd, got {v}"));
    }
    Ok(())
}

/// Trace, norm and quartic of `α(m, n)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AlphaParams {
    pub p: u64,
    pub t: BigInt,
    pub b: BigInt,
    pub m: i64,
    pub n: i64,
    /// `T = L_n L_m`.
    pub trace: BigInt,
    /// `N = F_m b²p (L_m F_n - 2F_m) + 4`.
    pub norm: BigInt,
    /// `(1, -T, N+2, -T, 1)`, leading coefficient first.
    pub coeffs: [BigInt; 5],
    /// `α ∉ Z`, i.e. the `√p` coefficient `(L_m F_n - 2F_m)b` is nonzero.
    pub alpha_irrational: bool,
    /// `α² - 4` is not a square in `Q(√p)`.
    pub alpha_sq_minus_4_nonsquare: bool,
}

impl AlphaParams {
    /// `(N+4)² - 4T²`, the norm of `α² - 4`.
    pub fn norm_gap(&self) -> BigInt {
        let n4 = &self.norm + 4;
        &n4 * &n4 - 4 * &self.trace * &self.trace
    }

    /// Both irreducibility preconditions of `f_α`.
    pub fn quartic_irreducible(&self) -> bool {
        self.alpha_irrational && self.alpha_sq_minus_4_nonsquare
    }
}

/// `L_m F_n - 2F_m` together with `F_m`, `L_m`, `L_n`.
struct Terms {
    fm: BigInt,
    lm: BigInt,
    ln: BigInt,
    c: BigInt,
}

fn terms(t: &BigInt, m: i64, n: i64) -> Terms {
    let pm = lucas::lucas_pair(t, m);
    let pn = lucas::lucas_pair(t, n);
    let c = &pm.l * &pn.f - 2 * &pm.f;
    Terms { fm: pm.f, lm: pm.l, ln: pn.l, c }
}

/// Whether `(u + v√p)/4` with `u ≡ v` parity constraints implicit is a square
/// of some `(x + y√p)/2`: solves `x² + py² = u`, `xy = v/2` exactly.
fn is_square_in_field(p: u64, u: &BigInt, half_v: &BigInt) -> bool {
    // (x² - py²)² = u² - 4p(xy)²
    let disc = u * u - 4 * p * half_v * half_v;
    let Some(s) = exact_sqrt(&disc) else { return false };
    for sign in [1, -1] {
        let twice: BigInt = u + sign * &s;
        if twice.is_odd() {
            continue;
        }
        let Some(x) = exact_sqrt(&(&twice / 2)) else { continue };
        if x.is_zero() {
            if half_v.is_zero() {
                let rest = u / p;
                if (u % p).is_zero() && exact_sqrt(&rest).is_some() {
                    return true;
                }
            }
            continue;
        }
        if !(half_v % &x).is_zero() {
            continue;
        }
        let y = half_v / &x;
        if &x * &x + p * &y * &y == *u {
            return true;
        }
    }
    false
}

/// Exact trace, norm and quartic coefficients of `α(m, n)`.
pub fn alpha_params(p: u64, t: &BigInt, b: &BigInt, m: i64, n: i64) -> Result<AlphaParams> {
    require_odd("m", m)?;
    require_odd("n", n)?;
    let Terms { fm, lm, ln, c } = terms(t, m, n);
    let d = b * b * p;
    let trace = &ln * &lm;
    let norm = &fm * &d * &c + 4;
    let coeffs = [BigInt::one(), -&trace, &norm + 2, -&trace, BigInt::one()];
    let sqrt_coeff = &c * b;
    // α² - 4 = ((T² + C²p - 16) + 2TC√p)/4 with C = cb
    let u = &trace * &trace + &sqrt_coeff * &sqrt_coeff * p - 16;
    let half_v = &trace * &sqrt_coeff;
    Ok(AlphaParams {
        p,
        t: t.clone(),
        b: b.clone(),
        m,
        n,
        alpha_irrational: !sqrt_coeff.is_zero(),
        alpha_sq_minus_4_nonsquare: !is_square_in_field(p, &u, &half_v),
        trace,
        norm,
        coeffs,
    })
}

/// `D_{m,n} = L_m(2F_m - F_n L_m)b`.
pub fn d_value(t: &BigInt, b: &BigInt, m: i64, n: i64) -> Result<BigInt> {
    require_odd("m", m)?;
    require_odd("n", n)?;
    let Terms { lm, c, .. } = terms(t, m, n);
    Ok(-(lm * c * b))
}

fn check_aux_prime(p: u64, q: u64, b: &BigInt) -> Result<()> {
    if !arith::prime(q) {
        return domain(format!("q = {q} is not prime"));
    }
    if q == 2 || q == p || (b % q).is_zero() {
        return domain(format!("q = {q} divides 2bp"));
    }
    Ok(())
}

/// `N_q = lcm(p²(p-1), q-1)` when `(p/q) = 1`, else `lcm(p²(p-1), 2(q+1))`.
pub fn nq_value(p: u64, q: u64, b: &BigInt) -> Result<u64> {
    check_aux_prime(p, q, b)?;
    let base = p
        .checked_mul(p)
        .and_then(|v| v.checked_mul(p - 1))
        .ok_or_else(|| Error::Domain(format!("p²(p-1) overflows for p = {p}")))?;
    let other = match arith::jacobi_symbol(&(p as i128), &(q as i128))? {
        1 => q - 1,
        _ => 2 * (q + 1),
    };
    let g = base.gcd(&other);
    (base / g).checked_mul(other).ok_or_else(|| Error::Domain(format!("N_q overflows for p = {p}, q = {q}")))
}

/// Outcome of the `p²` congruence on `(L_{m0} F_{n0} - 2F_{m0})b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionI {
    pub holds: bool,
    /// `(L_{m0} F_{n0} - 2F_{m0})b mod p²`.
    pub witness: u64,
    /// `(N+4)² - 4T² ≡ 0 (mod p⁵)`, evaluated from `T` and `N` directly.
    pub norm_gap_mod_p5: bool,
}

pub fn check_condition_i(p: u64, t: &BigInt, b: &BigInt, m0: i64, n0: i64) -> Result<ConditionI> {
    require_odd("m0", m0)?;
    require_odd("n0", n0)?;
    let p2 = BigInt::from(p) * p;
    let p5 = &p2 * &p2 * p;
    let witness = {
        let (fm, lm) = lucas::lucas_pair_mod_big(t, m0, &p2)?;
        let (fnn, _) = lucas::lucas_pair_mod_big(t, n0, &p2)?;
        let c: BigInt = lm * fnn - 2 * fm;
        (c * b).mod_floor(&p2)
    };
    let norm_gap_mod_p5 = {
        let (fm, lm) = lucas::lucas_pair_mod_big(t, m0, &p5)?;
        let (fnn, ln) = lucas::lucas_pair_mod_big(t, n0, &p5)?;
        let c = &lm * &fnn - 2 * &fm;
        let trace = &ln * &lm;
        let norm = &fm * b * b * p * &c + 4;
        let n4 = norm + 4;
        let gap: BigInt = &n4 * &n4 - 4 * &trace * &trace;
        gap.mod_floor(&p5).is_zero()
    };
    let holds = witness.is_zero();
    if holds != norm_gap_mod_p5 {
        return Err(Error::Internal(format!(
            "p² congruence and p⁵ threshold disagree at (m, n) = ({m0}, {n0})"
        )));
    }
    let witness = witness.to_u64().ok_or_else(|| Error::Domain("p² exceeds 64 bits".into()))?;
    Ok(ConditionI { holds, witness, norm_gap_mod_p5 })
}

/// Sign of `c√p - k`.
fn sign_sqrt_minus(c: &BigInt, p: u64, k: &BigInt) -> std::cmp::Ordering {
    use num_bigint::Sign::*;
    use std::cmp::Ordering::*;
    match (c.sign(), k.sign()) {
        (NoSign, _) => BigInt::zero().cmp(k),
        (Plus, Minus | NoSign) => Greater,
        (Minus, Plus | NoSign) => Less,
        (Plus, _) => (c * c * p).cmp(&(k * k)),
        (Minus, _) => (k * k).cmp(&(c * c * p)),
    }
}

/// `α² - 4 > 0` and `(N+4)² - 4T² ∈ p·Q²`, the latter nonzero.
pub fn check_condition_a1(p: u64, t: &BigInt, b: &BigInt, m: i64, n: i64) -> Result<bool> {
    use std::cmp::Ordering::*;
    let a = alpha_params(p, t, b, m, n)?;
    let Terms { c, .. } = terms(t, m, n);
    let coeff = c * b;
    // α > 2 iff C√p > 4 - T; α < -2 iff C√p < -4 - T
    let above = sign_sqrt_minus(&coeff, p, &(4 - &a.trace)) == Greater;
    let below = sign_sqrt_minus(&coeff, p, &(-4 - &a.trace)) == Less;
    let gap = a.norm_gap();
    let in_p_squares = !gap.is_zero() && exact_sqrt(&(&gap * p)).is_some();
    Ok((above || below) && in_p_squares)
}

/// A root witnessing the finite-field condition.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConditionII {
    /// Extension degree `i ∈ {1, 2, 4}`.
    pub level: u8,
    /// Canonically least root in `F_{q^i}` that is not a pth power.
    pub root: FieldElem,
    /// All roots in `F_{q^i}`.
    pub roots: Vec<FieldElem>,
}

/// Quartic coefficients reduced mod `q`, leading coefficient first.
pub fn quartic_mod(p: u64, t: &BigInt, b: &BigInt, m: i64, n: i64, q: u64) -> Result<[u64; 5]> {
    check_aux_prime(p, q, b)?;
    let (fm, lm) = lucas::lucas_pair_mod(t, m, q)?;
    let (fnn, ln) = lucas::lucas_pair_mod(t, n, q)?;
    Ok(quartic_from_residues(p, lucas::residue(b, q), q, (fm, lm), (fnn, ln)))
}

fn quartic_from_residues(p: u64, b: u64, q: u64, m: (u64, u64), n: (u64, u64)) -> [u64; 5] {
    let mm = |x: u64, y: u64| arith::mul_mod(x, y, q);
    let (fm, lm) = m;
    let (fnn, ln) = n;
    let c = (mm(lm, fnn) + q - mm(2, fm)) % q;
    let d = mm(mm(b, b), p % q);
    let trace = mm(ln, lm);
    let norm = (mm(mm(fm, d), c) + 4) % q;
    let neg_t = (q - trace) % q;
    [1 % q, neg_t, (norm + 2) % q, neg_t, 1 % q]
}

fn scan_quartic(coeffs: &[u64; 5], p: u64, tower: &FieldTower) -> Result<Option<ConditionII>> {
    let big: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    for level in [1u8, 2, 4] {
        let roots = ffield::quartic_roots(&big, tower, level)?;
        for r in &roots {
            if !ffield::is_pth_power(r, p, tower)? {
                return Ok(Some(ConditionII { level, root: r.clone(), roots }));
            }
        }
    }
    Ok(None)
}

/// Least `i ∈ {1, 2, 4}` and least root of the reduced quartic in `F_{q^i}`
/// outside the pth powers.
pub fn check_condition_ii(
    p: u64,
    t: &BigInt,
    b: &BigInt,
    m0: i64,
    n0: i64,
    q: u64,
    tower: &FieldTower,
) -> Result<Option<ConditionII>> {
    if tower.q() != q {
        return domain(format!("tower is over F_{}, expected F_{q}", tower.q()));
    }
    let coeffs = quartic_mod(p, t, b, m0, n0, q)?;
    scan_quartic(&coeffs, p, tower)
}

/// The check a failing certificate stopped at.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Check {
    Parity,
    ConditionI,
    /// No root of the reduced quartic in `F_q`, `F_{q²}` or `F_{q⁴}`.
    ConditionII,
    /// Roots exist but all are pth powers.
    PthPower,
}

impl Check {
    pub fn name(self) -> &'static str {
        match self {
            Check::Parity => "parity",
            Check::ConditionI => "condition_i",
            Check::ConditionII => "condition_ii",
            Check::PthPower => "pth_power",
        }
    }
}

/// Witness data for a residue class `(m0, n0)` and auxiliary prime `q`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Certificate {
    pub p: u64,
    pub t: BigInt,
    pub b: BigInt,
    pub q: u64,
    pub m0: i64,
    pub n0: i64,
    pub nq: u64,
    /// Reduced quartic, leading coefficient first.
    pub quartic_mod_q: [u64; 5],
    pub condition_i_witness: u64,
    pub condition_i: bool,
    pub norm_gap_mod_p5: bool,
    /// Extension degree of the witnessing root.
    pub level: Option<u8>,
    pub root: Option<FieldElem>,
    /// All roots in `F_{q^level}` (or in `F_q` when no level witnesses).
    pub roots: Vec<FieldElem>,
    pub pth_power_check: bool,
    pub parity_check: bool,
    /// Least `n ≡ n0 (mod N_q)` with `n > 3`.
    pub least_family_n: i64,
    /// Canonical tower polynomials, constant term first.
    pub quadratic_poly: Vec<u64>,
    pub quartic_poly: Vec<u64>,
    pub failure: Option<Check>,
}

impl Certificate {
    pub fn passed(&self) -> bool {
        self.failure.is_none()
    }

    /// Recomputes every check from `(p, m0, n0, q)` and the stored root.
    /// Returns the checks whose recorded outcome does not reproduce.
    pub fn verify(&self) -> Result<Vec<Check>> {
        let fresh = certify(self.p, self.m0, self.n0, self.q)?;
        let mut bad = Vec::new();
        if fresh.parity_check != self.parity_check || fresh.nq != self.nq {
            bad.push(Check::Parity);
        }
        if fresh.condition_i != self.condition_i
            || fresh.condition_i_witness != self.condition_i_witness
            || fresh.norm_gap_mod_p5 != self.norm_gap_mod_p5
        {
            bad.push(Check::ConditionI);
        }
        if fresh.quartic_mod_q != self.quartic_mod_q || fresh.level != self.level || fresh.roots != self.roots
        {
            bad.push(Check::ConditionII);
        }
        let tower = ffield::make_tower(self.q)?;
        let root_ok = match &self.root {
            Some(r) => {
                let big: Vec<BigInt> = self.quartic_mod_q.iter().map(|&c| BigInt::from(c)).collect();
                ffield::eval_quartic(&big, &tower, r).is_zero()
                    && !ffield::is_pth_power(r, self.p, &tower)?
                    && fresh.root.as_ref() == Some(r)
            }
            None => fresh.root.is_none(),
        };
        if !root_ok || fresh.pth_power_check != self.pth_power_check {
            bad.push(Check::PthPower);
        }
        if tower.defining_polynomial(2) != self.quadratic_poly
            || tower.defining_polynomial(4) != self.quartic_poly
        {
            bad.push(Check::ConditionII);
        }
        bad.sort();
        bad.dedup();
        Ok(bad)
    }
}

fn certify_with(unit: &FundamentalUnit, tower: &FieldTower, m0: i64, n0: i64) -> Result<Certificate> {
    let (p, q) = (unit.p, tower.q());
    let (t, b) = (&unit.t, &unit.b);
    require_odd("m0", m0)?;
    require_odd("n0", n0)?;
    let nq = nq_value(p, q, b)?;
    let parity_check = nq % 2 == 0;
    let cond_i = check_condition_i(p, t, b, m0, n0)?;
    let quartic = quartic_mod(p, t, b, m0, n0, q)?;
    let ii = scan_quartic(&quartic, p, tower)?;
    let (level, root, roots) = match &ii {
        Some(w) => (Some(w.level), Some(w.root.clone()), w.roots.clone()),
        None => {
            let big: Vec<BigInt> = quartic.iter().map(|&c| BigInt::from(c)).collect();
            (None, None, ffield::quartic_roots(&big, tower, 1)?)
        }
    };
    let any_root = !roots.is_empty() || {
        let big: Vec<BigInt> = quartic.iter().map(|&c| BigInt::from(c)).collect();
        !ffield::quartic_roots(&big, tower, 4)?.is_empty()
    };
    let pth_power_check = ii.is_some();
    let failure = if !parity_check {
        Some(Check::Parity)
    } else if !cond_i.holds {
        Some(Check::ConditionI)
    } else if !any_root {
        Some(Check::ConditionII)
    } else if !pth_power_check {
        Some(Check::PthPower)
    } else {
        None
    };
    let modulus = nq as i64;
    let mut least = n0.rem_euclid(modulus);
    while least <= 3 {
        least += modulus;
    }
    Ok(Certificate {
        p,
        t: t.clone(),
        b: b.clone(),
        q,
        m0,
        n0,
        nq,
        quartic_mod_q: quartic,
        condition_i_witness: cond_i.witness,
        condition_i: cond_i.holds,
        norm_gap_mod_p5: cond_i.norm_gap_mod_p5,
        level,
        root,
        roots,
        pth_power_check,
        parity_check,
        least_family_n: least,
        quadratic_poly: tower.defining_polynomial(2),
        quartic_poly: tower.defining_polynomial(4),
        failure,
    })
}

/// Checks both conditions for `(m0, n0, q)` and packages the evidence.
/// A failing certificate names the first check that failed.
pub fn certify(p: u64, m0: i64, n0: i64, q: u64) -> Result<Certificate> {
    let unit = realquad::fundamental_unit(p)?;
    check_aux_prime(p, q, &unit.b)?;
    let tower = ffield::make_tower(q)?;
    certify_with(&unit, &tower, m0, n0)
}

/// Which residue classes a search reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SearchFilter {
    #[default]
    All,
    /// `m ≡ m0` modulo the `m` grid modulus.
    MResidue(i64),
    /// `(m, n)` modulo the period of the sequences mod `q`.
    QClass { m: i64, n: i64 },
    /// The mod-`q` class of a known pair.
    Seed { m0: i64, n0: i64 },
}

/// Residue-class moduli of the search grid for one auxiliary prime.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchGrid {
    pub q: u64,
    /// Period of `F mod q`; the reduced quartic depends on `(m, n)` only modulo this.
    pub q_period: u64,
    /// Period of `2b·F_m/L_m mod p²`.
    pub ratio_period: u64,
    /// Period of `b·F_n mod p²`.
    pub f_period: u64,
    pub m_modulus: u64,
    pub n_modulus: u64,
    pub nq: u64,
}

/// A residue class `(m0 mod m_modulus, n0 mod n_modulus)` satisfying both conditions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SearchHit {
    pub q: u64,
    pub m0: u64,
    pub n0: u64,
    pub m_modulus: u64,
    pub n_modulus: u64,
    /// `2F_{m0}/L_{m0} mod p²`.
    pub ratio_residue: u64,
    /// `F_{n0} mod p²`.
    pub f_residue: u64,
    pub certificate: Certificate,
}

fn inv_mod(a: u64, m: u64) -> Option<u64> {
    let e = (a as i128).extended_gcd(&(m as i128));
    (e.gcd == 1).then(|| e.x.rem_euclid(m as i128) as u64)
}

/// Least period of `values`, whose full length is known to be a period.
fn least_period(values: &[u64]) -> u64 {
    let n = values.len() as u64;
    let mut best = n;
    let Some(primes) = arith::prime_factors_u64(n) else { return n };
    for r in primes {
        while best.is_multiple_of(r) && {
            let d = (best / r) as usize;
            values.iter().enumerate().all(|(i, v)| *v == values[i % d])
        } {
            best /= r;
        }
    }
    best
}

/// `2F_m/L_m mod p²` (`L_m` is a unit mod `p` since `L_m² ≡ ±4`).
pub fn ratio_residue(p: u64, t: &BigInt, m: i64) -> Result<u64> {
    let p2 = p * p;
    let (f, l) = lucas::lucas_pair_mod(t, m, p2)?;
    let inv = inv_mod(l, p2).ok_or_else(|| Error::Internal(format!("L_{m} not invertible mod {p2}")))?;
    Ok(arith::mul_mod(arith::mul_mod(2, f, p2), inv, p2))
}

/// `F_n mod p²`.
pub fn f_residue(p: u64, t: &BigInt, n: i64) -> Result<u64> {
    Ok(lucas::lucas_pair_mod(t, n, p * p)?.0)
}

fn lcm(a: u64, b: u64) -> Result<u64> {
    (a / a.gcd(&b)).checked_mul(b).ok_or_else(|| Error::Domain("grid modulus overflows".into()))
}

/// Grid moduli for `q`: `m` modulo `lcm(ratio period, q period)` and `n`
/// modulo `lcm(F period mod p², q period)`.
pub fn search_grid(unit: &FundamentalUnit, q: u64) -> Result<SearchGrid> {
    let p = unit.p;
    check_aux_prime(p, q, &unit.b)?;
    let p2 = p
        .checked_mul(p)
        .filter(|&v| v < 1 << 31)
        .ok_or_else(|| Error::Domain(format!("p = {p} is too large for the residue-class search")))?;
    let nq = nq_value(p, q, &unit.b)?;
    let q_period = lucas::period(&unit.t, q, Seq::F)?.period;
    let b2 = lucas::residue(&unit.b, p2);
    let pf = lucas::period(&unit.t, p2, Seq::F)?.period;
    let pl = lucas::period(&unit.t, p2, Seq::L)?.period;
    let full = lcm(pf, pl)?;
    let ratios: Vec<u64> = (0..full as i64)
        .map(|m| ratio_residue(p, &unit.t, m).map(|r| arith::mul_mod(r, b2, p2)))
        .collect::<Result<_>>()?;
    let ratio_period = least_period(&ratios);
    let fs: Vec<u64> = (0..pf as i64)
        .map(|n| f_residue(p, &unit.t, n).map(|f| arith::mul_mod(f, b2, p2)))
        .collect::<Result<_>>()?;
    let f_period = least_period(&fs);
    Ok(SearchGrid {
        q,
        q_period,
        ratio_period,
        f_period,
        m_modulus: lcm(ratio_period, q_period)?,
        n_modulus: lcm(f_period, q_period)?,
        nq,
    })
}

/// All odd residue classes `(m0, n0)` satisfying conditions (i) and (ii)
/// for each auxiliary prime, at the granularity of [`search_grid`].
///
/// Output is sorted by `(q, m0, n0)` and independent of scheduling.
pub fn search(p: u64, q_candidates: &[u64], filter: SearchFilter, scan_bound: u64) -> Result<Vec<SearchHit>> {
    if q_candidates.is_empty() {
        return domain("no auxiliary primes given");
    }
    let unit = realquad::fundamental_unit(p)?;
    let mut out = Vec::new();
    for &q in q_candidates {
        out.extend(search_one(&unit, q, filter, scan_bound)?);
    }
    out.sort_by_key(|h| (h.q, h.m0, h.n0));
    out.dedup_by_key(|h| (h.q, h.m0, h.n0));
    Ok(out)
}

fn search_one(
    unit: &FundamentalUnit,
    q: u64,
    filter: SearchFilter,
    scan_bound: u64,
) -> Result<Vec<SearchHit>> {
    let grid = search_grid(unit, q)?;
    let (p, t) = (unit.p, &unit.t);
    let p2 = p * p;
    if (grid.m_modulus / 2).saturating_mul(grid.n_modulus / 2) > scan_bound {
        return Err(Error::Resource(format!(
            "grid {} × {} exceeds the scan bound {scan_bound}",
            grid.m_modulus, grid.n_modulus
        )));
    }
    let tower = ffield::make_tower(q)?;
    let b_p2 = lucas::residue(&unit.b, p2);
    let b_q = lucas::residue(&unit.b, q);
    let pq = grid.q_period as i64;
    let q_class = match filter {
        SearchFilter::QClass { m, n } => Some((m.rem_euclid(pq), n.rem_euclid(pq))),
        SearchFilter::Seed { m0, n0 } => Some((m0.rem_euclid(pq), n0.rem_euclid(pq))),
        _ => None,
    };
    let m_ok = |m: i64| match (filter, q_class) {
        (SearchFilter::MResidue(r), _) => m == r.rem_euclid(grid.m_modulus as i64),
        (_, Some((qm, _))) => m % pq == qm,
        _ => true,
    };
    let n_ok = |n: i64| q_class.is_none_or(|(_, qn)| n % pq == qn);

    let mut by_key: BTreeMap<u64, Vec<i64>> = BTreeMap::new();
    for n in (1..grid.n_modulus as i64).step_by(2).filter(|&n| n_ok(n)) {
        let key = arith::mul_mod(f_residue(p, t, n)?, b_p2, p2);
        by_key.entry(key).or_default().push(n);
    }
    let ms: Vec<i64> = (1..grid.m_modulus as i64).step_by(2).filter(|&m| m_ok(m)).collect();
    let candidates: Vec<(i64, i64, [u64; 5])> = ms
        .par_iter()
        .map(|&m| -> Result<Vec<(i64, i64, [u64; 5])>> {
            let key = arith::mul_mod(ratio_residue(p, t, m)?, b_p2, p2);
            let Some(ns) = by_key.get(&key) else { return Ok(Vec::new()) };
            let mq = lucas::pair_mod_unchecked(&lucas::residue(t, q), m, q);
            Ok(ns
                .iter()
                .map(|&n| {
                    let nq = lucas::pair_mod_unchecked(&lucas::residue(t, q), n, q);
                    (m, n, quartic_from_residues(p, b_q, q, mq, nq))
                })
                .collect())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();

    let mut distinct: Vec<[u64; 5]> = candidates.iter().map(|c| c.2).collect();
    distinct.sort_unstable();
    distinct.dedup();
    let verdicts: HashMap<[u64; 5], bool> = distinct
        .par_iter()
        .map(|c| scan_quartic(c, p, &tower).map(|w| (*c, w.is_some())))
        .collect::<Result<_>>()?;

    let mut hits: Vec<SearchHit> = candidates
        .par_iter()
        .filter(|c| verdicts[&c.2])
        .map(|&(m, n, _)| {
            let certificate = certify_with(unit, &tower, m, n)?;
            if !certificate.passed() {
                return Err(Error::Internal(format!("search hit ({m}, {n}) mod {q} fails certification")));
            }
            Ok(SearchHit {
                q,
                m0: m as u64,
                n0: n as u64,
                m_modulus: grid.m_modulus,
                n_modulus: grid.n_modulus,
                ratio_residue: ratio_residue(p, t, m)?,
                f_residue: f_residue(p, t, n)?,
                certificate,
            })
        })
        .collect::<Result<_>>()?;
    hits.sort_by_key(|h| (h.m0, h.n0));
    Ok(hits)
}

/// Which of `D` and `pD` gives `K` and `K'`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DiscKind {
    D,
    PD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FieldPairLabel {
    pub n_mod_4: u8,
    pub k: DiscKind,
    pub k_prime: DiscKind,
}

/// `(K, K') = (Q(√D), Q(√pD))` for `n ≡ 1 (mod 4)` and swapped for `n ≡ 3`.
pub fn field_pair_label(n: i64) -> Result<FieldPairLabel> {
    require_odd("n", n)?;
    let n_mod_4 = n.rem_euclid(4) as u8;
    let (k, k_prime) = if n_mod_4 == 1 { (DiscKind::D, DiscKind::PD) } else { (DiscKind::PD, DiscKind::D) };
    Ok(FieldPairLabel { n_mod_4, k, k_prime })
}
