//! The quartic character `χ` of `F_p` with `χ(ι) = i`, its Jacobi sum in
//! `Z[i]`, numeric Gauss-sum identities, and the integer formulas for `λ²`,
//! `μ²` and the `F_{4n±1}` square identity.

use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{Float, FloatConst, Num, NumCast, ToPrimitive, Zero};

use crate::arith::{self, TwoSquares};
use crate::error::{domain, Error, Result};
use crate::lucas::lucas_pair;

/// Gauss sums are evaluated numerically only up to this prime.
pub const GAUSS_SUM_MAX_P: u64 = 10_000;

/// `re + im·i` in `Z[i]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt<T> {
    pub re: T,
    pub im: T,
}

impl<T: Clone + Num + Neg<Output = T>> GaussianInt<T> {
    pub fn new(re: T, im: T) -> Self {
        GaussianInt { re, im }
    }

    pub fn conj(&self) -> Self {
        GaussianInt { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    /// `i^k`.
    pub fn i_pow(k: u64) -> Self {
        let (z, o) = (T::zero(), T::one());
        match k % 4 {
            0 => GaussianInt::new(o, z),
            1 => GaussianInt::new(z, o),
            2 => GaussianInt::new(-o, z),
            _ => GaussianInt::new(z, -o),
        }
    }
}

impl<T: Num> Add for GaussianInt<T> {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        GaussianInt { re: self.re + o.re, im: self.im + o.im }
    }
}

impl<T: Num> Sub for GaussianInt<T> {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        GaussianInt { re: self.re - o.re, im: self.im - o.im }
    }
}

impl<T: Num + Clone> Mul for GaussianInt<T> {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        GaussianInt {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re * o.im + self.im * o.re,
        }
    }
}

/// Primitive root `ι` mod `p` normalized by `t ≡ -2ι^{(p-1)/4} (mod p)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IotaChoice {
    pub p: u64,
    pub t: BigInt,
    pub iota: u64,
}

fn is_primitive_root(g: u64, p: u64, primes: &[u64]) -> bool {
    primes.iter().all(|&l| arith::pow_mod(g, (p - 1) / l, p) != 1)
}

/// Least primitive root satisfying the normalization. Replacing `ι` by
/// `-ι` flips the sign of `ι^{(p-1)/4}`, so one of the two always works.
pub fn choose_iota(p: u64, t: &BigInt) -> Result<IotaChoice> {
    if p % 8 != 5 || !arith::prime(p) {
        return domain(format!("choose_iota needs a prime p ≡ 5 (mod 8), got {p}"));
    }
    let t_mod = t.mod_floor(&BigInt::from(p)).to_u64().expect("residue below p");
    if !(arith::mul_mod(t_mod, t_mod, p) + 4).is_multiple_of(p) {
        return domain(format!("t² ≢ -4 (mod {p})"));
    }
    let primes = arith::prime_factors_u64(p - 1).expect("p - 1 fits in u64");
    let target = (p - t_mod) % p;
    (2..p)
        .find(|&g| {
            is_primitive_root(g, p, &primes)
                && arith::mul_mod(2, arith::pow_mod(g, (p - 1) / 4, p), p) == target
        })
        .map(|iota| IotaChoice { p, t: t.clone(), iota })
        .ok_or_else(|| Error::Internal(format!("no normalized primitive root mod {p}")))
}

/// Discrete logarithms to base `ι`; index 0 is unused.
fn log_table(c: &IotaChoice) -> Vec<u64> {
    let p = c.p;
    let mut logs = vec![0u64; p as usize];
    let mut x = 1u64;
    for k in 0..p - 1 {
        logs[x as usize] = k;
        x = arith::mul_mod(x, c.iota, p);
    }
    logs
}

/// `J(χ, χ) = Σ χ(a)χ(1-a)` exactly.
pub fn jacobi_sum(c: &IotaChoice) -> GaussianInt<i64> {
    let p = c.p;
    let logs = log_table(c);
    (2..p).fold(GaussianInt::new(0, 0), |acc, a| {
        acc + GaussianInt::i_pow(logs[a as usize] + logs[(p + 1 - a) as usize])
    })
}

/// The identities checked by [`gauss_sum_report`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum GaussIdentity {
    /// `G(χ)G(χ̄) = -p`
    Product,
    /// `G(χ)² = √p(A + iB)`
    Square,
    /// `G(χ̄)² = √p(A - iB)`
    ConjugateSquare,
    /// `(G(χ) + G(χ̄))² = 2√pA - 2p`
    SumSquare,
    /// `(G(χ) - G(χ̄))² = 2√pA + 2p`
    DifferenceSquare,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussSumReport<F> {
    pub p: u64,
    pub g: Complex<F>,
    pub g_bar: Complex<F>,
    /// Absolute residual of each identity.
    pub residuals: Vec<(GaussIdentity, F)>,
    pub tolerance: F,
}

impl<F: Float> GaussSumReport<F> {
    pub fn all_hold(&self) -> bool {
        self.residuals.iter().all(|(_, r)| *r <= self.tolerance)
    }

    pub fn failures(&self) -> Vec<GaussIdentity> {
        self.residuals.iter().filter(|(_, r)| *r > self.tolerance).map(|(i, _)| *i).collect()
    }
}

fn cast<F: NumCast>(v: impl ToPrimitive) -> F {
    F::from(v).expect("value representable in the float type")
}

/// Evaluates `G(χ) = Σ χ(a)ζ^a` and `G(χ̄)` over `ζ = exp(2πi/p)` and checks
/// the five identities to absolute tolerance `10⁻⁹·p`.
pub fn gauss_sum_report<F: Float + FloatConst>(c: &IotaChoice) -> Result<GaussSumReport<F>> {
    let p = c.p;
    if p > GAUSS_SUM_MAX_P {
        return Err(Error::Resource(format!("Gauss sums are evaluated for p <= {GAUSS_SUM_MAX_P}")));
    }
    let ts = arith::two_squares(p, &c.t)?;
    let logs = log_table(c);
    let zero = Complex::new(F::zero(), F::zero());
    let (mut g, mut g_bar) = (zero, zero);
    let step = F::TAU() / cast(p);
    for a in 1..p {
        let chi = GaussianInt::<i64>::i_pow(logs[a as usize]);
        let chi = Complex::new(cast::<F>(chi.re), cast::<F>(chi.im));
        let zeta = Complex::from_polar(F::one(), step * cast(a));
        g = g + chi * zeta;
        g_bar = g_bar + chi.conj() * zeta;
    }
    let pf: F = cast(p);
    let root = pf.sqrt();
    let (a, b) = (cast::<F>(ts.a), cast::<F>(ts.b));
    let two: F = cast(2);
    let real = |x: F| Complex::new(x, F::zero());
    let checks = [
        (GaussIdentity::Product, g * g_bar, real(-pf)),
        (GaussIdentity::Square, g * g, Complex::new(root * a, root * b)),
        (GaussIdentity::ConjugateSquare, g_bar * g_bar, Complex::new(root * a, -(root * b))),
        (GaussIdentity::SumSquare, (g + g_bar) * (g + g_bar), real(two * root * a - two * pf)),
        (GaussIdentity::DifferenceSquare, (g - g_bar) * (g - g_bar), real(two * root * a + two * pf)),
    ];
    let residuals = checks.iter().map(|(id, lhs, rhs)| (*id, (*lhs - *rhs).norm())).collect();
    Ok(GaussSumReport { p, g, g_bar, residuals, tolerance: cast::<F>(1e-9) * pf })
}

fn halve(v: BigInt, what: &str) -> Result<BigInt> {
    if v.is_odd() {
        return Err(Error::Internal(format!("{what} is odd")));
    }
    Ok(v / 2)
}

/// `(λ², μ²)` with
/// `λ² = -½(F_n L_m - 2F_m)·bp·L_m·(bpF_n - L_n A - 2B)` and `μ²` the same
/// with `+L_n A`.
pub fn lambda_mu_squares(
    p: u64,
    t: &BigInt,
    b: &BigInt,
    a_coef: i64,
    b_coef: i64,
    m: i64,
    n: i64,
) -> Result<(BigInt, BigInt)> {
    if m.rem_euclid(2) != 1 || n.rem_euclid(2) != 1 {
        return domain(format!("m and n must be odd, got ({m}, {n})"));
    }
    let pm = lucas_pair(t, m);
    let pn = lucas_pair(t, n);
    let bp = b * p;
    let c: BigInt = &pn.f * &pm.l - 2 * &pm.f;
    let head: BigInt = -(&c * &bp * &pm.l);
    let tail = &bp * &pn.f - 2 * b_coef;
    let la = &pn.l * a_coef;
    let lambda = halve(&head * (&tail - &la), "λ² numerator")?;
    let mu = halve(&head * (&tail + &la), "μ² numerator")?;
    Ok((lambda, mu))
}

/// `bpF_{4n±1} ∓ L_{4n±1}A - 2B = 2p(x0·F_{2n} ± y0·F_{2n±1})²` for both signs.
pub fn lemma47_check(p: u64, t: &BigInt, b: &BigInt, ts: &TwoSquares, n: i64) -> bool {
    let bp = b * p;
    let f2n = lucas_pair(t, 2 * n).f;
    [1i64, -1].iter().all(|&s| {
        let outer = lucas_pair(t, 4 * n + s);
        let lhs = &bp * &outer.f - s * &outer.l * ts.a - 2 * ts.b;
        let inner = &ts.x0 * &f2n + s * &ts.y0 * lucas_pair(t, 2 * n + s).f;
        lhs == 2 * p * &inner * &inner
    })
}

/// Whether `x ∈ y·Q²` for nonzero integers: `xy` is a perfect square.
pub fn in_square_class(x: &BigInt, y: &BigInt) -> bool {
    !x.is_zero() && !y.is_zero() && arith::exact_sqrt(&(x * y)).is_some()
}
