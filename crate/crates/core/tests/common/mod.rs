//! Reference values and independent oracles shared by the integration tests.
#![allow(dead_code)]

use cyclicpair::arith;

/// `(m0 mod 50, n0 mod 100)` for `p = 5`, `q = 11`.
pub const P5_Q11_CLASSES: [(u64, u64); 5] = [(7, 31), (17, 11), (27, 91), (37, 71), (47, 51)];
/// `2F_{m0}/L_{m0} mod 25`.
pub const P5_Q11_RATIOS: [(u64, u64); 5] = [(7, 19), (17, 14), (27, 9), (37, 4), (47, 24)];
/// `F_{n0} mod 25`.
pub const P5_Q11_F: [(u64, u64); 5] = [(11, 14), (31, 19), (51, 24), (71, 4), (91, 9)];

/// `(m0 mod 338, n0 mod 676)` for `p = 13`, `q = 53`.
pub const P13_Q53_CLASSES: [(u64, u64); 13] = [
    (15, 55),
    (41, 263),
    (67, 471),
    (93, 3),
    (119, 211),
    (145, 419),
    (171, 627),
    (197, 159),
    (223, 367),
    (249, 575),
    (275, 107),
    (301, 315),
    (327, 523),
];
/// `2F_{m0}/L_{m0} mod 169`.
pub const P13_Q53_RATIOS: [(u64, u64); 13] = [
    (15, 127),
    (41, 88),
    (67, 49),
    (93, 10),
    (119, 140),
    (145, 101),
    (171, 62),
    (197, 23),
    (223, 153),
    (249, 114),
    (275, 75),
    (301, 36),
    (327, 166),
];
/// `F_{n0} mod 169`.
pub const P13_Q53_F: [(u64, u64); 13] = [
    (3, 10),
    (55, 127),
    (107, 75),
    (159, 23),
    (211, 140),
    (263, 88),
    (315, 36),
    (367, 153),
    (419, 101),
    (471, 49),
    (523, 166),
    (575, 114),
    (627, 62),
];

/// Root sets of the reduced quartics for `(1, n0)` at `q = 61`.
pub const P5_Q61_ROOTS: [(i64, [u64; 4]); 4] =
    [(97, [10, 30, 55, 59]), (103, [26, 33, 37, 54]), (197, [7, 24, 28, 35]), (203, [2, 6, 31, 51])];

pub const FIFTH_POWERS_MOD_61: [u64; 12] = [1, 11, 13, 14, 21, 29, 32, 40, 47, 48, 50, 60];

pub const D_15_55: &str = "-35297949870282964311195913270006746882588864";
/// `(prime, exponent)` factors of `D_{15,55}` for `p = 13`.
pub const D_15_55_FACTORS: [(u64, u32); 8] =
    [(2, 6), (3, 2), (13, 2), (61, 1), (109, 1), (131, 1), (211, 1), (1063, 1)];

/// Kronecker symbol `(d/a)` for `a > 0`.
pub fn kronecker(d: i64, a: i64) -> i64 {
    let mut a = a;
    let mut s = 1i64;
    while a % 2 == 0 {
        a /= 2;
        s *= match d.rem_euclid(8) {
            1 | 7 => 1,
            3 | 5 => -1,
            _ => 0,
        };
    }
    s * arith::jacobi_symbol(&d, &a).unwrap() as i64
}

/// `h(d) = (w / 2|d|)·|Σ_{a<|d|} χ_d(a)·a|` for a negative fundamental discriminant.
pub fn class_number_by_character_sum(d: i64) -> u64 {
    let n = d.abs();
    let sum: i64 = (1..n).map(|a| kronecker(d, a) * a).sum();
    let w = match d {
        -3 => 6,
        -4 => 4,
        _ => 2,
    };
    (w * sum.abs() / (2 * n)) as u64
}

/// Negative fundamental discriminants, by direct definition.
pub fn is_fundamental_oracle(d: i64) -> bool {
    let squarefree = |n: i64| (2..).take_while(|k| k * k <= n).all(|k| n % (k * k) != 0);
    match d.rem_euclid(4) {
        1 => squarefree(-d),
        0 => matches!((d / 4).rem_euclid(4), 2 | 3) && squarefree(-d / 4),
        _ => false,
    }
}

/// Primes `p ≡ 5 (mod 8)` below `bound`.
pub fn primes_5_mod_8(bound: u64) -> Vec<u64> {
    (5..bound).step_by(8).filter(|&p| arith::is_prime(p).unwrap()).collect()
}

/// Odd prime powers `q^r` in `(lo, hi]`, sorted by `(q, r)`.
pub fn odd_prime_powers(lo: u64, hi: u64) -> Vec<(u64, u8)> {
    let mut out = Vec::new();
    for q in (3..=hi).step_by(2).filter(|&q| arith::is_prime(q).unwrap()) {
        let mut power = q;
        let mut r = 1u8;
        while power <= hi {
            if power > lo {
                out.push((q, r));
            }
            power *= q;
            r += 1;
        }
    }
    out
}
