//! `verify --suite` runners. Each returns a check count and violation list.

use clap::ValueEnum;
use serde::Serialize;

use cyclicpair::arith;
use cyclicpair::charsums;
use cyclicpair::curves::{self, SmallField};
use cyclicpair::lucas::{self, Seq};
use cyclicpair::realquad::fundamental_unit;
use cyclicpair::{Error, GaussSumReportF64, Int, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Identities,
    Gauss,
    Lemma47,
    Curves,
    Periods,
}

#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub p: u64,
    pub suite: Suite,
    pub scope: String,
    pub checks: u64,
    pub violations: Vec<String>,
}

pub struct Options {
    pub range: i64,
    pub q: Vec<u64>,
    pub max_order: u64,
}

pub fn run(p: u64, suite: Suite, opts: &Options) -> Result<SuiteReport> {
    let (scope, checks, violations) = match suite {
        Suite::Identities => identities(p, opts.range)?,
        Suite::Gauss => gauss(p)?,
        Suite::Lemma47 => lemma47(p, opts.range)?,
        Suite::Curves => curve_suite(opts.max_order)?,
        Suite::Periods => periods(p, &opts.q)?,
    };
    Ok(SuiteReport { p, suite, scope, checks, violations })
}

type Outcome = Result<(String, u64, Vec<String>)>;

fn identities(p: u64, range: i64) -> Outcome {
    let u = fundamental_unit(p)?;
    let report = lucas::identity_suite(&u.t, &u.b, &Int::from(p), -range..=range, -range..=range);
    let violations = report
        .violations
        .iter()
        .map(|v| match v.m {
            Some(m) => format!("{:?} at n = {}, m = {m}", v.identity, v.n),
            None => format!("{:?} at n = {}", v.identity, v.n),
        })
        .collect();
    Ok((format!("|n|, |m| <= {range}"), report.total_checks(), violations))
}

fn gauss(p: u64) -> Outcome {
    let u = fundamental_unit(p)?;
    let iota = charsums::choose_iota(p, &u.t)?;
    let ts = arith::two_squares(p, &u.t)?;
    let j = charsums::jacobi_sum(&iota);
    let mut violations = Vec::new();
    if (j.re, j.im) != (ts.a, ts.b) {
        violations.push(format!("J = {} + {}i but (A, B) = ({}, {})", j.re, j.im, ts.a, ts.b));
    }
    let report: GaussSumReportF64 = charsums::gauss_sum_report(&iota)?;
    for f in report.failures() {
        violations.push(format!("{f:?} off by more than {:e}", report.tolerance));
    }
    let checks = 1 + report.residuals.len() as u64;
    Ok((format!("iota = {}, tolerance {:e}", iota.iota, report.tolerance), checks, violations))
}

fn lemma47(p: u64, range: i64) -> Outcome {
    let u = fundamental_unit(p)?;
    let ts = arith::two_squares(p, &u.t)?;
    let violations = (-range..=range)
        .filter(|&n| !charsums::lemma47_check(p, &u.t, &u.b, &ts, n))
        .map(|n| format!("n = {n}"))
        .collect();
    Ok((format!("|n| <= {range}"), 2 * (2 * range as u64 + 1), violations))
}

/// Odd prime powers `45 < q^r <= max_order`.
fn fields(max_order: u64) -> Vec<(u64, u8)> {
    let mut out = Vec::new();
    for q in (3..=max_order).step_by(2) {
        if !arith::is_prime(q).unwrap_or(false) {
            continue;
        }
        let (mut power, mut r) = (q, 1u8);
        while power <= max_order {
            if power > 45 {
                out.push((q, r));
            }
            power *= q;
            r += 1;
        }
    }
    out
}

fn curve_suite(max_order: u64) -> Outcome {
    let mut checks = 0;
    let mut violations = Vec::new();
    for (q, r) in fields(max_order) {
        checks += 1;
        if !curves::y_set_is_full(q, r)? {
            violations.push(format!("Y is not all of F_{q}^{r}"));
        }
        let field = SmallField::new(q, r)?;
        for c in curves::all_curve_counts(&field)? {
            checks += 1;
            if !c.bounds_hold() || !c.s_k_nonempty {
                violations.push(format!(
                    "F_{q}^{r}, k = {}: {} affine points, {} with XZ != 0, |S_k| = {}",
                    c.k, c.affine_points, c.xz_nonzero_points, c.s_k_size
                ));
            }
        }
    }
    Ok((format!("odd prime powers 45 < q^r <= {max_order}"), checks, violations))
}

fn periods(p: u64, qs: &[u64]) -> Outcome {
    let u = fundamental_unit(p)?;
    let p2 = p * p;
    let mut checks = 0;
    let mut violations = Vec::new();
    for (seq, bound) in [(Seq::F, p2 * (p - 1)), (Seq::L, p * (p - 1))] {
        let per = lucas::period(&u.t, p2, seq)?.period;
        checks += 1;
        if bound % per != 0 {
            violations.push(format!("{seq:?} mod {p2} has period {per}, not dividing {bound}"));
        }
    }
    let mut skipped = Vec::new();
    for &q in qs {
        if !arith::is_prime(q)? {
            return Err(Error::Domain(format!("q = {q} is not prime")));
        }
        let twice_bp: Int = 2 * &u.b * p;
        if (twice_bp % q) == Int::from(0) {
            skipped.push(q);
            continue;
        }
        let bound = match arith::jacobi_symbol(&(p as i64), &(q as i64))? {
            1 => q - 1,
            _ => 2 * (q + 1),
        };
        for seq in [Seq::F, Seq::L] {
            let per = lucas::period(&u.t, q, seq)?.period;
            checks += 1;
            if bound % per != 0 {
                violations.push(format!("{seq:?} mod {q} has period {per}, not dividing {bound}"));
            }
        }
    }
    let mut scope = format!("mod {p2} and mod q in {qs:?}");
    if !skipped.is_empty() {
        scope.push_str(&format!(", skipped q | 2bp: {skipped:?}"));
    }
    Ok((scope, checks, violations))
}
