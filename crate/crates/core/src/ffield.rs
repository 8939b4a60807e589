//! The tower `F_q ⊂ F_{q²} ⊂ F_{q⁴}` for an odd prime `q`, quartic root
//! extraction and pth-power residue tests.
//!
//! Elements are coefficient vectors over `F_q`, constant term first, with
//! respect to the lexicographically least monic irreducible of each degree.
//! `F_{q²}` sits inside `F_{q⁴}` by sending its generator to the least root
//! of its defining polynomial in `F_{q⁴}`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::ToPrimitive;
use rand_chacha::rand_core::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::arith::{self, mul_mod};
use crate::error::{domain, Error, Result};

/// Largest supported base prime; keeps `q⁴` inside `u128`.
pub const MAX_Q: u64 = u32::MAX as u64;

/// Primes below this find their `F_q` roots by evaluating at every point.
const EXHAUSTIVE_SCAN_BELOW: u64 = 10_000;

/// An element of `F_{q^level}`.
///
/// Ordering is by level, then lexicographically on the coefficient vector
/// with the constant term most significant.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct FieldElem {
    pub level: u8,
    pub coeffs: Vec<u64>,
}

impl FieldElem {
    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    /// The value in `F_q` when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then(|| self.coeffs[0])
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FieldTower {
    q: u64,
    quadratic: Vec<u64>,
    quartic: Vec<u64>,
    embedding: FieldElem,
}

fn check_level(level: u8) -> Result<()> {
    match level {
        1 | 2 | 4 => Ok(()),
        _ => domain(format!("extension degree must be 1, 2 or 4, got {level}")),
    }
}

impl FieldTower {
    pub fn q(&self) -> u64 {
        self.q
    }

    /// Monic defining polynomial of `F_{q^level}`, constant term first
    /// (`X` for the prime field).
    pub fn defining_polynomial(&self, level: u8) -> Vec<u64> {
        match level {
            1 => vec![0, 1],
            2 => self.quadratic.clone(),
            _ => self.quartic.clone(),
        }
    }

    /// Image of the generator of `F_{q²}` in `F_{q⁴}`.
    pub fn embedding(&self) -> &FieldElem {
        &self.embedding
    }

    /// `q^level`.
    pub fn order(&self, level: u8) -> u128 {
        (self.q as u128).pow(level as u32)
    }

    pub fn zero(&self, level: u8) -> FieldElem {
        FieldElem { level, coeffs: vec![0; level as usize] }
    }

    pub fn one(&self, level: u8) -> FieldElem {
        self.constant(level, 1)
    }

    /// `c mod q` in `F_{q^level}`.
    pub fn constant(&self, level: u8, c: u64) -> FieldElem {
        let mut coeffs = vec![0; level as usize];
        coeffs[0] = c % self.q;
        FieldElem { level, coeffs }
    }

    pub fn from_int(&self, level: u8, c: &BigInt) -> FieldElem {
        let r = c.mod_floor(&BigInt::from(self.q)).to_u64().expect("residue below q");
        self.constant(level, r)
    }

    /// Element from a coefficient vector, reducing each entry mod `q`.
    pub fn element(&self, level: u8, coeffs: &[u64]) -> Result<FieldElem> {
        check_level(level)?;
        if coeffs.len() != level as usize {
            return domain(format!("expected {level} coefficients, got {}", coeffs.len()));
        }
        Ok(FieldElem { level, coeffs: coeffs.iter().map(|c| c % self.q).collect() })
    }

    pub fn add(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + y) % self.q).collect();
        FieldElem { level: a.level, coeffs }
    }

    pub fn sub(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let coeffs = a.coeffs.iter().zip(&b.coeffs).map(|(x, y)| (x + self.q - y) % self.q).collect();
        FieldElem { level: a.level, coeffs }
    }

    pub fn neg(&self, a: &FieldElem) -> FieldElem {
        self.sub(&self.zero(a.level), a)
    }

    pub fn mul(&self, a: &FieldElem, b: &FieldElem) -> FieldElem {
        let q = self.q;
        let d = a.level as usize;
        if d == 1 {
            return FieldElem { level: 1, coeffs: vec![mul_mod(a.coeffs[0], b.coeffs[0], q)] };
        }
        let mut prod = vec![0u64; 2 * d - 1];
        for (i, &x) in a.coeffs.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.coeffs.iter().enumerate() {
                prod[i + j] = (prod[i + j] + mul_mod(x, y, q)) % q;
            }
        }
        let modulus = if d == 2 { &self.quadratic } else { &self.quartic };
        for k in (d..2 * d - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            for j in 0..d {
                let sub = mul_mod(c, modulus[j], q);
                prod[k - d + j] = (prod[k - d + j] + q - sub) % q;
            }
            prod[k] = 0;
        }
        prod.truncate(d);
        FieldElem { level: a.level, coeffs: prod }
    }

    pub fn pow(&self, a: &FieldElem, mut e: u128) -> FieldElem {
        let mut base = a.clone();
        let mut acc = self.one(a.level);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(&acc, &base);
            }
            base = self.mul(&base, &base);
            e >>= 1;
        }
        acc
    }

    pub fn inv(&self, a: &FieldElem) -> Result<FieldElem> {
        if a.is_zero() {
            return domain("zero has no inverse");
        }
        Ok(self.pow(a, self.order(a.level) - 2))
    }

    /// Image of `a` in `F_{q^level}` under the tower embeddings.
    pub fn embed(&self, a: &FieldElem, level: u8) -> Result<FieldElem> {
        check_level(level)?;
        if level < a.level || !level.is_multiple_of(a.level) {
            return domain(format!("cannot embed level {} into level {level}", a.level));
        }
        if a.level == level {
            return Ok(a.clone());
        }
        if a.level == 1 {
            return Ok(self.constant(level, a.coeffs[0]));
        }
        let c0 = self.constant(4, a.coeffs[0]);
        let c1 = self.constant(4, a.coeffs[1]);
        Ok(self.add(&c0, &self.mul(&c1, &self.embedding)))
    }

    /// Every element of `F_{q^level}` in canonical order. Only sensible for small fields.
    pub fn elements(&self, level: u8) -> impl Iterator<Item = FieldElem> + '_ {
        let d = level as usize;
        let q = self.q;
        (0..self.order(level)).map(move |mut k| {
            let mut coeffs = vec![0u64; d];
            for c in coeffs.iter_mut().rev() {
                *c = (k % q as u128) as u64;
                k /= q as u128;
            }
            FieldElem { level, coeffs }
        })
    }

    /// Least generator of `F_{q^level}^×` in canonical order, for `level ∈ {1, 2}`.
    pub fn generator(&self, level: u8) -> Result<FieldElem> {
        if level != 1 && level != 2 {
            return domain(format!("generator is provided for degrees 1 and 2, got {level}"));
        }
        let n = self.order(level) - 1;
        let n64 = u64::try_from(n).map_err(|_| Error::Domain("group order too large".into()))?;
        let primes =
            arith::prime_factors_u64(n64).ok_or_else(|| Error::Internal(format!("cannot factor {n64}")))?;
        self.elements(level)
            .filter(|g| !g.is_zero())
            .find(|g| primes.iter().all(|&l| self.pow(g, n / l as u128) != self.one(level)))
            .ok_or_else(|| Error::Internal("no generator found".into()))
    }
}

/// Polynomials over `F_{q^level}`, constant term first, with no trailing zeros.
struct PolyRing<'a> {
    tower: &'a FieldTower,
    level: u8,
}

type Poly = Vec<FieldElem>;

impl PolyRing<'_> {
    fn trim(&self, mut f: Poly) -> Poly {
        while f.last().is_some_and(|c| c.is_zero()) {
            f.pop();
        }
        f
    }

    fn x(&self) -> Poly {
        vec![self.tower.zero(self.level), self.tower.one(self.level)]
    }

    fn sub(&self, f: &Poly, g: &Poly) -> Poly {
        let t = self.tower;
        let n = f.len().max(g.len());
        let zero = t.zero(self.level);
        let out = (0..n).map(|i| t.sub(f.get(i).unwrap_or(&zero), g.get(i).unwrap_or(&zero))).collect();
        self.trim(out)
    }

    fn mul(&self, f: &Poly, g: &Poly) -> Poly {
        if f.is_empty() || g.is_empty() {
            return Vec::new();
        }
        let t = self.tower;
        let mut out = vec![t.zero(self.level); f.len() + g.len() - 1];
        for (i, a) in f.iter().enumerate() {
            for (j, b) in g.iter().enumerate() {
                out[i + j] = t.add(&out[i + j], &t.mul(a, b));
            }
        }
        self.trim(out)
    }

    fn rem(&self, f: &Poly, g: &Poly) -> Poly {
        let t = self.tower;
        let lead_inv = t.inv(g.last().expect("nonzero divisor")).expect("nonzero lead");
        let mut r = f.clone();
        while r.len() >= g.len() {
            let shift = r.len() - g.len();
            let c = t.mul(r.last().expect("nonempty"), &lead_inv);
            for (j, gj) in g.iter().enumerate() {
                r[shift + j] = t.sub(&r[shift + j], &t.mul(&c, gj));
            }
            r.pop();
            r = self.trim(r);
        }
        r
    }

    fn monic(&self, f: &Poly) -> Poly {
        let t = self.tower;
        let inv = t.inv(f.last().expect("nonzero polynomial")).expect("nonzero lead");
        f.iter().map(|c| t.mul(c, &inv)).collect()
    }

    fn gcd(&self, f: &Poly, g: &Poly) -> Poly {
        let (mut a, mut b) = (f.clone(), g.clone());
        while !b.is_empty() {
            let r = self.rem(&a, &b);
            a = b;
            b = r;
        }
        if a.is_empty() {
            a
        } else {
            self.monic(&a)
        }
    }

    fn pow_mod(&self, base: &Poly, mut e: u128, modulus: &Poly) -> Poly {
        let mut acc = vec![self.tower.one(self.level)];
        let mut b = self.rem(base, modulus);
        while e > 0 {
            if e & 1 == 1 {
                acc = self.rem(&self.mul(&acc, &b), modulus);
            }
            b = self.rem(&self.mul(&b, &b), modulus);
            e >>= 1;
        }
        acc
    }

    fn eval(&self, f: &Poly, x: &FieldElem) -> FieldElem {
        let t = self.tower;
        f.iter().rev().fold(t.zero(self.level), |acc, c| t.add(&t.mul(&acc, x), c))
    }

    fn random_elem(&self, rng: &mut ChaCha8Rng) -> FieldElem {
        let q = self.tower.q;
        let coeffs = (0..self.level).map(|_| rng.next_u64() % q).collect();
        FieldElem { level: self.level, coeffs }
    }

    /// Distinct roots of `f` in `F_{q^level}`, sorted.
    fn roots(&self, f: &Poly) -> Vec<FieldElem> {
        let f = self.trim(f.clone());
        if f.len() < 2 {
            return Vec::new();
        }
        let f = self.monic(&f);
        let q_order = self.tower.order(self.level);
        let frob = self.pow_mod(&self.x(), q_order, &f);
        let split = self.gcd(&f, &self.sub(&frob, &self.x()));
        let mut rng = ChaCha8Rng::seed_from_u64(self.tower.q ^ ((self.level as u64) << 56));
        let mut out = Vec::new();
        self.split(&split, q_order, &mut rng, &mut out);
        out.sort();
        out
    }

    /// Equal-degree splitting of a product of distinct linear factors.
    fn split(&self, f: &Poly, q_order: u128, rng: &mut ChaCha8Rng, out: &mut Vec<FieldElem>) {
        match f.len() {
            0 | 1 => return,
            2 => {
                out.push(self.tower.neg(&f[0]));
                return;
            }
            _ => {}
        }
        loop {
            let shift = vec![self.random_elem(rng), self.tower.one(self.level)];
            let w = self.pow_mod(&shift, (q_order - 1) / 2, f);
            let d = self.gcd(f, &self.sub(&w, &vec![self.tower.one(self.level)]));
            if d.len() > 1 && d.len() < f.len() {
                let other = self.quotient(f, &d);
                self.split(&d, q_order, rng, out);
                self.split(&other, q_order, rng, out);
                return;
            }
        }
    }

    fn quotient(&self, f: &Poly, g: &Poly) -> Poly {
        let t = self.tower;
        let lead_inv = t.inv(g.last().expect("nonzero divisor")).expect("nonzero lead");
        let mut r = f.clone();
        let mut quot = vec![t.zero(self.level); f.len() - g.len() + 1];
        while r.len() >= g.len() {
            let shift = r.len() - g.len();
            let c = t.mul(r.last().expect("nonempty"), &lead_inv);
            for (j, gj) in g.iter().enumerate() {
                r[shift + j] = t.sub(&r[shift + j], &t.mul(&c, gj));
            }
            quot[shift] = c;
            r.pop();
            r = self.trim(r);
        }
        self.trim(quot)
    }
}

/// Rabin's test for a monic polynomial over `F_q` of degree 2 or 4.
fn is_irreducible(tower: &FieldTower, coeffs: &[u64]) -> bool {
    let ring = PolyRing { tower, level: 1 };
    let f: Poly = coeffs.iter().map(|&c| tower.constant(1, c)).collect();
    let d = coeffs.len() as u32 - 1;
    let x = ring.rem(&ring.x(), &f);
    let q = tower.q as u128;
    let full = ring.pow_mod(&x, q.pow(d), &f);
    if !ring.sub(&full, &x).is_empty() {
        return false;
    }
    // Rabin: no factor over F_{q^(d/l)} for each prime l | d
    let primes = arith::prime_factors_u64(d as u64).unwrap_or_default();
    primes.iter().all(|&l| {
        let part = ring.pow_mod(&x, q.pow(d / l as u32), &f);
        ring.gcd(&f, &ring.sub(&part, &x)).len() == 1
    })
}

/// Lexicographically least monic irreducible of degree `d` (constant term most significant).
fn least_irreducible_in(tower: &FieldTower, d: usize) -> Vec<u64> {
    let q = tower.q as u128;
    // a zero constant term is divisible by X, so start at constant term 1
    (q.pow(d as u32 - 1)..q.pow(d as u32))
        .map(|mut k| {
            let mut coeffs = vec![0u64; d + 1];
            coeffs[d] = 1;
            for c in coeffs[..d].iter_mut().rev() {
                *c = (k % q) as u64;
                k /= q;
            }
            coeffs
        })
        .find(|c| is_irreducible(tower, c))
        .expect("irreducible polynomials exist in every degree")
}

/// Least monic irreducible of degree `d` over `F_q` in the canonical order,
/// constant term first in the returned vector.
pub fn least_irreducible(q: u64, d: usize) -> Result<Vec<u64>> {
    if d == 0 {
        return domain("degree must be positive");
    }
    if (q as u128).checked_pow(d as u32).is_none_or(|n| n > u64::MAX as u128) {
        return domain(format!("{q}^{d} is too large"));
    }
    let tower = make_tower(q)?;
    Ok(if d == 2 {
        tower.quadratic.clone()
    } else if d == 4 {
        tower.quartic.clone()
    } else {
        least_irreducible_in(&tower, d)
    })
}

/// Canonical tower over `F_q`.
pub fn make_tower(q: u64) -> Result<FieldTower> {
    if q < 3 || q.is_multiple_of(2) || !arith::prime(q) {
        return domain(format!("{q} is not an odd prime"));
    }
    if q > MAX_Q {
        return domain(format!("q must be at most {MAX_Q}"));
    }
    let mut tower = FieldTower {
        q,
        quadratic: vec![0, 0, 1],
        quartic: vec![0, 0, 0, 0, 1],
        embedding: FieldElem { level: 4, coeffs: vec![0; 4] },
    };
    tower.quadratic = least_irreducible_in(&tower, 2);
    tower.quartic = least_irreducible_in(&tower, 4);
    let ring = PolyRing { tower: &tower, level: 4 };
    let quad: Poly = tower.quadratic.iter().map(|&c| tower.constant(4, c)).collect();
    let roots = ring.roots(&quad);
    tower.embedding = roots
        .first()
        .cloned()
        .ok_or_else(|| Error::Internal(format!("degree-2 polynomial has no root in F_{q}^4")))?;
    Ok(tower)
}

/// Distinct roots in `F_{q^level}` of the integer quartic with coefficients
/// listed from `X⁴` down to the constant term, canonically sorted.
pub fn quartic_roots(coeffs: &[BigInt], tower: &FieldTower, level: u8) -> Result<Vec<FieldElem>> {
    check_level(level)?;
    if coeffs.len() != 5 {
        return domain(format!("expected 5 coefficients, got {}", coeffs.len()));
    }
    let f: Poly = coeffs.iter().rev().map(|c| tower.from_int(level, c)).collect();
    if f.iter().all(FieldElem::is_zero) {
        return domain(format!("polynomial vanishes identically mod {}", tower.q));
    }
    if f[4].is_zero() {
        return domain(format!("leading coefficient vanishes mod {}", tower.q));
    }
    let ring = PolyRing { tower, level };
    if level == 1 && tower.q < EXHAUSTIVE_SCAN_BELOW {
        return Ok(tower.elements(1).filter(|x| ring.eval(&f, x).is_zero()).collect());
    }
    Ok(ring.roots(&f))
}

/// Evaluates the quartic (coefficients from `X⁴` down) at `a`.
pub fn eval_quartic(coeffs: &[BigInt], tower: &FieldTower, a: &FieldElem) -> FieldElem {
    let ring = PolyRing { tower, level: a.level };
    let f: Poly = coeffs.iter().rev().map(|c| tower.from_int(a.level, c)).collect();
    ring.eval(&f, a)
}

/// Whether `a ∈ (F_{q^i}^×)^p`, with `i` the level of `a`.
pub fn is_pth_power(a: &FieldElem, p: u64, tower: &FieldTower) -> Result<bool> {
    if a.is_zero() {
        return domain("pth-power test of zero");
    }
    let n = tower.order(a.level) - 1;
    if !n.is_multiple_of(p as u128) {
        return Ok(true);
    }
    Ok(tower.pow(a, n / p as u128) == tower.one(a.level))
}

/// The subgroup of pth powers in `F_q^×`, sorted.
pub fn pth_power_subgroup(q: u64, p: u64) -> Result<Vec<u64>> {
    if !arith::prime(q) || !arith::prime(p) {
        return domain(format!("pth_power_subgroup needs primes, got q = {q}, p = {p}"));
    }
    if !(q - 1).is_multiple_of(p) {
        return Ok((1..q).collect());
    }
    let g = if q == 2 { 1 } else { make_tower(q)?.generator(1)?.coeffs[0] };
    let h = arith::pow_mod(g, p, q);
    let mut out = Vec::with_capacity(((q - 1) / p) as usize);
    let mut x = 1u64;
    for _ in 0..(q - 1) / p {
        out.push(x);
        x = mul_mod(x, h, q);
    }
    out.sort_unstable();
    Ok(out)
}

/// Least generator of `F_{q^r}^×` for `r ∈ {1, 2}` under the canonical tower.
pub fn generator(q: u64, r: u8) -> Result<FieldElem> {
    make_tower(q)?.generator(r)
}
