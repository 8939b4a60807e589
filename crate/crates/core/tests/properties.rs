mod common;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use common::*;
use cyclicpair::arith;
use cyclicpair::charsums;
use cyclicpair::curves::{self, SmallField};
use cyclicpair::family::{self, SearchFilter, DEFAULT_SCAN_BOUND};
use cyclicpair::ffield::{self, FieldElem};
use cyclicpair::lucas;
use cyclicpair::realquad::fundamental_unit;

const PS: [u64; 5] = [5, 13, 29, 37, 53];

fn odd(range: std::ops::RangeInclusive<i64>) -> impl Iterator<Item = i64> {
    range.filter(|v| v.rem_euclid(2) == 1)
}

fn gcd_big(a: &BigInt, b: &BigInt) -> BigInt {
    a.gcd(b)
}

// arith / realquad

#[test]
fn two_squares_invariants() {
    for p in primes_5_mod_8(10_000) {
        let u = fundamental_unit(p).unwrap();
        let ts = arith::two_squares(p, &u.t).unwrap();
        assert_eq!(ts.a * ts.a + ts.b * ts.b, p as i64);
        let bp = &u.b * p;
        let at = &u.t * ts.a;
        let hits = [&at + 2 * ts.b, &at - 2 * ts.b].iter().filter(|v| (*v % p).is_zero()).count();
        assert_eq!(hits, 1, "p = {p}");
        for s in [1i64, -1] {
            let lhs = &at + s * 2 * ts.b;
            let rhs = &u.t * ts.b - s * 2 * ts.a;
            assert_eq!(&bp * &bp - &lhs * &lhs, &rhs * &rhs, "p = {p}");
            assert!(bp >= lhs.abs());
        }
        let (x2, y2) = (&ts.x0 * &ts.x0, &ts.y0 * &ts.y0);
        assert!(gcd_big(&x2, &y2).is_one(), "p = {p}");
    }
}

#[test]
fn fundamental_units_are_least() {
    for p in primes_5_mod_8(10_000) {
        let u = fundamental_unit(p).unwrap();
        assert_eq!(&u.t * &u.t + 4, &u.b * &u.b * p);
        if let Some(b) = num_traits::ToPrimitive::to_u64(&u.b) {
            // every smaller b' has no t' with t'² + 4 = b'²p
            for b2 in 1..b.min(2000) {
                let v: BigInt = BigInt::from(b2 * b2) * p - 4;
                assert!(v.is_negative() || v.sqrt().pow(2) != v, "p = {p}, b' = {b2}");
            }
        }
    }
}

proptest! {
    #[test]
    fn squarefree_part_recomposes(a in -1_000_000_000i64..1_000_000_000) {
        prop_assume!(a != 0);
        let d = arith::squarefree_part(&BigInt::from(a)).unwrap();
        prop_assert_eq!(&d.s * &d.root * &d.root, BigInt::from(a));
        let s = d.s.abs();
        let mut k = 2u64;
        while BigInt::from(k * k) <= s {
            prop_assert!(!(&s % (k * k)).is_zero());
            k += 1;
        }
    }

    #[test]
    fn jacobi_multiplicative(a in -500i64..500, b in -500i64..500, n in 1i64..400) {
        let n = 2 * n + 1;
        let j = |x: i64| arith::jacobi_symbol(&x, &n).unwrap() as i64;
        prop_assert_eq!(j(a * b), j(a) * j(b));
    }
}

// lucas

proptest! {
    #[test]
    fn fast_doubling_matches_recurrence(pi in 0usize..5, n in -2000i64..=2000, m in 2u64..10_000) {
        let u = fundamental_unit(PS[pi]).unwrap();
        let t = (&u.t % m).to_u64_digits().1.first().copied().unwrap_or(0);
        let (mut f0, mut f1) = (0u64, 1u64);
        let (mut l0, mut l1) = (2 % m, t % m);
        // F_{k+1} = tF_k + F_{k-1}; walk backwards with F_{k-1} = F_{k+1} - tF_k
        let steps = n.unsigned_abs();
        for _ in 0..steps {
            if n > 0 {
                (f0, f1) = (f1, (t * f1 + f0) % m);
                (l0, l1) = (l1, (t * l1 + l0) % m);
            } else {
                let fp = (f1 + m - (t * f0) % m) % m;
                let lp = (l1 + m - (t * l0) % m) % m;
                (f0, f1) = (fp, f0);
                (l0, l1) = (lp, l0);
            }
        }
        prop_assert_eq!(lucas::lucas_pair_mod(&u.t, n, m).unwrap(), (f0, l0));
    }
}

#[test]
fn sign_laws() {
    for p in PS {
        let u = fundamental_unit(p).unwrap();
        for n in 0..=500i64 {
            let pos = lucas::lucas_pair(&u.t, n);
            let neg = lucas::lucas_pair(&u.t, -n);
            let s = if n % 2 == 0 { -1 } else { 1 };
            assert_eq!(neg.f, &pos.f * s);
            assert_eq!(neg.l, &pos.l * -s);
        }
    }
}

#[test]
fn periods_mod_p_squared() {
    for p in PS {
        let u = fundamental_unit(p).unwrap();
        let p2 = p * p;
        let f = lucas::period(&u.t, p2, lucas::Seq::F).unwrap().period;
        let l = lucas::period(&u.t, p2, lucas::Seq::L).unwrap().period;
        assert_eq!(p2 * (p - 1) % f, 0, "p = {p}");
        assert_eq!(p * (p - 1) % l, 0, "p = {p}");
    }
}

#[test]
fn periods_mod_q() {
    for p in PS {
        let u = fundamental_unit(p).unwrap();
        for q in (3..400u64).filter(|&q| arith::is_prime(q).unwrap()) {
            let bp2: BigInt = 2 * &u.b * p;
            if (bp2 % q).is_zero() {
                continue;
            }
            let f = lucas::period(&u.t, q, lucas::Seq::F).unwrap().period;
            let bound = if arith::jacobi_symbol(&(p as i64), &(q as i64)).unwrap() == 1 {
                q - 1
            } else {
                2 * (q + 1)
            };
            assert_eq!(bound % f, 0, "p = {p}, q = {q}");
        }
    }
}

// family

#[test]
fn d_negative_and_positivity_on_grid() {
    for p in PS {
        let u = fundamental_unit(p).unwrap();
        for m in odd(-50..=50) {
            for n in odd(5..=50) {
                let d = family::d_value(&u.t, &u.b, m, n).unwrap();
                assert!(d.is_negative(), "p = {p}, (m, n) = ({m}, {n})");
                let pm = lucas::lucas_pair(&u.t, m);
                let fnn = lucas::lucas_pair(&u.t, n).f;
                let c: BigInt = &pm.l * &fnn - 2 * &pm.f;
                assert!((&pm.l * &c * &u.b).is_positive());
                let a = family::alpha_params(p, &u.t, &u.b, m, n).unwrap();
                let want = &pm.l * &pm.l * &u.b * &u.b * p * &c * &c;
                assert_eq!(a.norm_gap(), want, "p = {p}, (m, n) = ({m}, {n})");
            }
        }
    }
}

fn certified(p: u64, q: u64) -> Vec<family::Certificate> {
    family::search(p, &[q], SearchFilter::All, DEFAULT_SCAN_BOUND)
        .unwrap()
        .into_iter()
        .map(|h| h.certificate)
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn certificates_stable_under_nq_shifts(which in 0usize..3, idx in 0usize..64, k in 0i64..40, j in -40i64..40) {
        let (p, q) = [(5, 11), (5, 61), (13, 53)][which];
        let certs = certified(p, q);
        let c = &certs[idx % certs.len()];
        let nq = c.nq as i64;
        let (m, n) = (c.m0 + j * nq, c.n0 + k * nq);
        prop_assume!(n > 3);
        let ci = family::check_condition_i(p, &c.t, &c.b, m, n).unwrap();
        prop_assert!(ci.holds);
        prop_assert_eq!(family::quartic_mod(p, &c.t, &c.b, m, n, q).unwrap(), c.quartic_mod_q);
    }
}

#[test]
fn condition_ii_absent_without_pth_roots_of_unity() {
    // q^4 ≢ 1 mod 13 for each q below
    let p = 13u64;
    let u = fundamental_unit(p).unwrap();
    for q in [3u64, 7, 11, 17, 19] {
        assert!([1u32, 2, 4].iter().all(|&i| (q.pow(i) - 1) % p != 0));
        let tower = ffield::make_tower(q).unwrap();
        for (m, n) in [(1, 5), (3, 7), (15, 55), (5, 9)] {
            let r = family::check_condition_ii(p, &u.t, &u.b, m, n, q, &tower).unwrap();
            assert!(r.is_none(), "q = {q}, (m, n) = ({m}, {n})");
        }
    }
}

#[test]
fn field_pair_labels_swap() {
    for n in odd(-41..=41) {
        let a = family::field_pair_label(n).unwrap();
        let b = family::field_pair_label(n + 2).unwrap();
        assert_eq!(a.k, b.k_prime);
        assert_eq!(a.k_prime, b.k);
    }
}

// ffield

fn small_q() -> impl Strategy<Value = u64> {
    prop::sample::select(vec![3u64, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 61, 67, 71])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn quartic_roots_nest(q in small_q(), c in prop::array::uniform2(0u64..1000)) {
        let tower = ffield::make_tower(q).unwrap();
        let coeffs: Vec<BigInt> =
            [1, c[0], c[1], c[0], 1].iter().map(|&v| BigInt::from(v)).collect();
        let mut prev: Vec<FieldElem> = Vec::new();
        let mut prev_level = 1u8;
        for level in [1u8, 2, 4] {
            let roots = ffield::quartic_roots(&coeffs, &tower, level).unwrap();
            for r in &roots {
                prop_assert!(ffield::eval_quartic(&coeffs, &tower, r).is_zero());
            }
            for r in &prev {
                let e = tower.embed(r, level).unwrap();
                prop_assert!(roots.contains(&e), "root at level {} lost at level {}", prev_level, level);
            }
            prev = roots;
            prev_level = level;
        }
    }
}

#[test]
fn pth_power_test_matches_enumeration() {
    for q in (3..=5000u64).filter(|&q| arith::is_prime(q).unwrap()) {
        let tower = ffield::make_tower(q).unwrap();
        for level in [1u8, 2] {
            let size = tower.order(level);
            if size > 5000 {
                continue;
            }
            for p in [5u64, 13] {
                let nonzero: Vec<FieldElem> = tower.elements(level).filter(|a| !a.is_zero()).collect();
                let mut powers: Vec<FieldElem> = nonzero.iter().map(|a| tower.pow(a, p as u128)).collect();
                powers.sort();
                powers.dedup();
                for a in &nonzero {
                    let want = powers.binary_search(a).is_ok();
                    assert_eq!(
                        ffield::is_pth_power(a, p, &tower).unwrap(),
                        want,
                        "q^{level} = {size}, p = {p}"
                    );
                }
            }
        }
    }
}

#[test]
fn norm_compatibility() {
    for q in (3..=70u64).filter(|&q| arith::is_prime(q).unwrap()) {
        let tower = ffield::make_tower(q).unwrap();
        for p in [5u64, 13] {
            if (q - 1) % p != 0 {
                continue;
            }
            for a in tower.elements(1).filter(|a| !a.is_zero()) {
                let up = tower.embed(&a, 2).unwrap();
                if ffield::is_pth_power(&up, p, &tower).unwrap() {
                    assert!(ffield::is_pth_power(&a, p, &tower).unwrap(), "q = {q}, p = {p}");
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn field_axioms(q in small_q(), a in prop::collection::vec(0u64..1000, 4), b in prop::collection::vec(0u64..1000, 4)) {
        let tower = ffield::make_tower(q).unwrap();
        let a = tower.element(4, &a.iter().map(|v| v % q).collect::<Vec<_>>()).unwrap();
        let b = tower.element(4, &b.iter().map(|v| v % q).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(tower.mul(&a, &b), tower.mul(&b, &a));
        prop_assert_eq!(tower.sub(&tower.add(&a, &b), &b), a.clone());
        if !a.is_zero() {
            prop_assert_eq!(tower.mul(&a, &tower.inv(&a).unwrap()), tower.one(4));
            prop_assert_eq!(tower.pow(&a, tower.order(4) - 1), tower.one(4));
        }
    }
}

// charsums

#[test]
fn lambda_mu_square_classes() {
    for p in PS {
        let u = fundamental_unit(p).unwrap();
        let ts = arith::two_squares(p, &u.t).unwrap();
        for m in odd(1..=15) {
            for n in odd(5..=15) {
                let d = family::d_value(&u.t, &u.b, m, n).unwrap();
                let (l2, mu2) = charsums::lambda_mu_squares(p, &u.t, &u.b, ts.a, ts.b, m, n).unwrap();
                let target = if n % 4 == 1 { &l2 } else { &mu2 };
                assert!(charsums::in_square_class(target, &d), "p = {p}, (m, n) = ({m}, {n})");
            }
        }
    }
}

#[test]
fn iota_normalization() {
    for p in primes_5_mod_8(1000) {
        let u = fundamental_unit(p).unwrap();
        let c = charsums::choose_iota(p, &u.t).unwrap();
        let pw = |b: u64, e: u64| (0..e).fold(1u64, |acc, _| acc * b % p);
        // generates (Z/p)^×
        let order = (1..p).find(|&k| pw(c.iota, k) == 1).unwrap();
        assert_eq!(order, p - 1);
        let sum: BigInt = &u.t + BigInt::from(2 * pw(c.iota, (p - 1) / 4));
        let lhs = sum.mod_floor(&BigInt::from(p));
        assert!(lhs.is_zero(), "p = {p}");
    }
}

// curves

#[test]
fn y_set_independent_of_generator() {
    for (q, r) in odd_prime_powers(1, 500) {
        let field = SmallField::new(q, r).unwrap();
        let n = q.pow(r as u32) - 1;
        let full = field.order as u64;
        let base = curves::y_set_size(&field, 1).unwrap() == full;
        let s = (3..n).step_by(2).find(|&s| s.gcd(&n) == 1);
        if let Some(s) = s {
            let other = curves::y_set_size(&field, s).unwrap() == full;
            assert_eq!(base, other, "q^r = {q}^{r}, s = {s}");
        }
    }
}

#[test]
fn curve_counts_small_fields() {
    for (q, r) in odd_prime_powers(45, 400) {
        let field = SmallField::new(q, r).unwrap();
        for c in curves::all_curve_counts(&field).unwrap() {
            assert!(c.bounds_hold(), "{c:?}");
            assert!(c.s_k_nonempty, "{c:?}");
        }
    }
}

// classgroup

#[test]
fn small_unit_groups() {
    use cyclicpair::classgroup::class_number;
    assert_eq!(class_number(-3).unwrap(), 1);
    assert_eq!(class_number(-4).unwrap(), 1);
    assert_eq!(class_number_by_character_sum(-3), 1);
    assert_eq!(class_number_by_character_sum(-4), 1);
}

proptest! {
    #[test]
    fn fundamental_discriminant_shape(d in -1_000_000i64..-1) {
        use cyclicpair::classgroup::fundamental_discriminant;
        let fd = fundamental_discriminant(&BigInt::from(d));
        let s = arith::squarefree_part(&BigInt::from(d)).unwrap().s;
        if s.is_one() {
            prop_assert!(fd.is_err());
        } else {
            let fd = fd.unwrap();
            let want = if s.mod_floor(&BigInt::from(4)).is_one() { s } else { 4 * s };
            prop_assert_eq!(&fd, &want);
            prop_assert!(is_fundamental_oracle(num_traits::ToPrimitive::to_i64(&fd).unwrap()));
        }
    }
}
