mod document;
mod suites;

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_traits::Signed;
use serde::Serialize;

use cyclicpair::arith;
use cyclicpair::family::{self, DiscKind, SearchFilter, SearchHit, DEFAULT_SCAN_BOUND};
use cyclicpair::realquad::fundamental_unit;
use cyclicpair::Error;

use document::CertificateDocument;
use suites::Suite;

#[derive(Parser)]
#[command(
    name = "cyclicpair",
    version,
    about = "Search and certify Lucas-sequence cyclic field pairs for p ≡ 5 (mod 8)"
)]
struct Cli {
    /// Aligned plain text instead of JSON.
    #[arg(long, global = true)]
    text: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Fundamental unit (t + b√p)/2 of Q(√p).
    Unit { p: u64 },
    /// Residue classes (m0, n0) satisfying both conditions for each q.
    Search(SearchArgs),
    /// Certificate document for one class and auxiliary prime.
    Certify {
        p: u64,
        #[arg(allow_negative_numbers = true)]
        m0: i64,
        #[arg(allow_negative_numbers = true)]
        n0: i64,
        q: u64,
        /// Also write the JSON document to this file.
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run one verification suite.
    Verify {
        p: u64,
        #[arg(long, value_enum)]
        suite: Suite,
        /// Index bound for the identities and lemma47 suites.
        #[arg(long, default_value_t = 50)]
        range: i64,
        /// Auxiliary primes for the periods suite.
        #[arg(long, value_delimiter = ',', default_values_t = [11u64, 53, 61])]
        q: Vec<u64>,
        /// Largest field size for the curves suite.
        #[arg(long, default_value_t = 2000)]
        max_order: u64,
    },
    /// D_{m,n} with its small prime factors.
    Disc {
        p: u64,
        #[arg(allow_negative_numbers = true)]
        m: i64,
        #[arg(allow_negative_numbers = true)]
        n: i64,
        #[arg(long, default_value_t = arith::DEFAULT_TRIAL_BOUND)]
        trial_bound: u64,
    },
    /// Re-verify a certificate document by replaying it.
    Check { file: PathBuf },
}

#[derive(Args)]
struct SearchArgs {
    p: u64,
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    /// Print one residue-class table per class mod the period of F mod q,
    /// with the 2F/L and F witness columns.
    #[arg(long)]
    emit_tables: bool,
    /// Only m ≡ M0 modulo the m grid modulus.
    #[arg(long, allow_negative_numbers = true, conflicts_with_all = ["seed", "q_class"])]
    m0: Option<i64>,
    /// Only the class mod the F-period of a known pair.
    #[arg(long, value_name = "M,N", value_parser = parse_pair, allow_hyphen_values = true, conflicts_with = "q_class")]
    seed: Option<(i64, i64)>,
    /// Only (m, n) ≡ (M, N) mod the F-period.
    #[arg(long, value_name = "M,N", value_parser = parse_pair, allow_hyphen_values = true)]
    q_class: Option<(i64, i64)>,
    #[arg(long, default_value_t = DEFAULT_SCAN_BOUND)]
    scan_bound: u64,
}

fn parse_pair(s: &str) -> Result<(i64, i64), String> {
    let (a, b) = s.split_once(',').ok_or("expected M,N")?;
    let num = |v: &str| v.trim().parse::<i64>().map_err(|e| format!("{v:?}: {e}"));
    Ok((num(a)?, num(b)?))
}

/// What went wrong, mapped to the exit code.
enum Failure {
    /// Exit 1.
    Verification(String),
    /// Exit 2.
    Usage(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Internal(_) => Failure::Verification(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

type Run = Result<Output, Failure>;

/// Rendered output and whether it counts as a pass.
struct Output {
    text: String,
    ok: bool,
}

fn json<T: Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("serializable") + "\n"
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Unit { p } => cmd_unit(p, cli.text),
        Command::Search(args) => cmd_search(&args, cli.text),
        Command::Certify { p, m0, n0, q, output } => cmd_certify(p, m0, n0, q, output, cli.text),
        Command::Verify { p, suite, range, q, max_order } => {
            cmd_verify(p, suite, &suites::Options { range, q, max_order }, cli.text)
        }
        Command::Disc { p, m, n, trial_bound } => cmd_disc(p, m, n, trial_bound, cli.text),
        Command::Check { file } => cmd_check(&file, cli.text),
    };
    match result {
        Ok(out) => {
            print!("{}", out.text);
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Failure::Verification(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

#[derive(Serialize)]
struct UnitDoc {
    p: u64,
    t: String,
    b: String,
}

fn cmd_unit(p: u64, text: bool) -> Run {
    let u = fundamental_unit(p)?;
    let text = if text {
        format!("p = {p}\nt = {}\nb = {}\n", u.t, u.b)
    } else {
        json(&UnitDoc { p, t: u.t.to_string(), b: u.b.to_string() })
    };
    Ok(Output { text, ok: true })
}

#[derive(Serialize)]
struct GridDoc {
    q: u64,
    q_period: u64,
    ratio_period: u64,
    f_period: u64,
    m_modulus: u64,
    n_modulus: u64,
    nq: u64,
}

#[derive(Serialize)]
struct HitDoc {
    q: u64,
    m0: u64,
    n0: u64,
    q_class: [u64; 2],
    ratio_residue: u64,
    f_residue: u64,
    level: Option<u8>,
    root: Option<Vec<u64>>,
}

#[derive(Serialize)]
struct SearchDoc {
    p: u64,
    t: String,
    b: String,
    filter: String,
    grids: Vec<GridDoc>,
    hits: Vec<HitDoc>,
}

fn filter_of(args: &SearchArgs) -> SearchFilter {
    if let Some(m0) = args.m0 {
        SearchFilter::MResidue(m0)
    } else if let Some((m0, n0)) = args.seed {
        SearchFilter::Seed { m0, n0 }
    } else if let Some((m, n)) = args.q_class {
        SearchFilter::QClass { m, n }
    } else {
        SearchFilter::All
    }
}

fn filter_name(f: SearchFilter) -> String {
    match f {
        SearchFilter::All => "all".into(),
        SearchFilter::MResidue(m) => format!("m0 = {m}"),
        SearchFilter::QClass { m, n } => format!("q-class ({m}, {n})"),
        SearchFilter::Seed { m0, n0 } => format!("seed ({m0}, {n0})"),
    }
}

fn cmd_search(args: &SearchArgs, text: bool) -> Run {
    let p = args.p;
    let unit = fundamental_unit(p)?;
    let filter = filter_of(args);
    let hits = family::search(p, &args.q, filter, args.scan_bound)?;
    let mut grids = BTreeMap::new();
    for &q in &args.q {
        grids.insert(q, family::search_grid(&unit, q)?);
    }
    let class_of = |h: &SearchHit| {
        let qp = grids[&h.q].q_period;
        [h.m0 % qp, h.n0 % qp]
    };
    if args.emit_tables {
        return Ok(Output { text: tables(p, &hits, &grids, class_of), ok: true });
    }
    if text {
        let mut out = String::new();
        writeln!(out, "p = {p}, t = {}, b = {}, filter: {}", unit.t, unit.b, filter_name(filter)).unwrap();
        writeln!(out, "{:>6} {:>6} {:>6} {:>8} {:>8} {:>5}", "q", "m0", "n0", "2F/L", "F", "i").unwrap();
        for h in &hits {
            let level = h.certificate.level.map_or("-".into(), |l| l.to_string());
            writeln!(
                out,
                "{:>6} {:>6} {:>6} {:>8} {:>8} {:>5}",
                h.q, h.m0, h.n0, h.ratio_residue, h.f_residue, level
            )
            .unwrap();
        }
        return Ok(Output { text: out, ok: true });
    }
    let doc = SearchDoc {
        p,
        t: unit.t.to_string(),
        b: unit.b.to_string(),
        filter: filter_name(filter),
        grids: grids
            .values()
            .map(|g| GridDoc {
                q: g.q,
                q_period: g.q_period,
                ratio_period: g.ratio_period,
                f_period: g.f_period,
                m_modulus: g.m_modulus,
                n_modulus: g.n_modulus,
                nq: g.nq,
            })
            .collect(),
        hits: hits
            .iter()
            .map(|h| HitDoc {
                q: h.q,
                m0: h.m0,
                n0: h.n0,
                q_class: class_of(h),
                ratio_residue: h.ratio_residue,
                f_residue: h.f_residue,
                level: h.certificate.level,
                root: h.certificate.root.as_ref().map(|r| r.coeffs.clone()),
            })
            .collect(),
    };
    Ok(Output { text: json(&doc), ok: true })
}

/// One block per (q, class mod the F-period): the class table followed by
/// the `2F/L mod p²` column sorted by `m0` and the `F mod p²` column sorted by `n0`.
fn tables(
    p: u64,
    hits: &[SearchHit],
    grids: &BTreeMap<u64, family::SearchGrid>,
    class_of: impl Fn(&SearchHit) -> [u64; 2],
) -> String {
    let mut blocks: BTreeMap<(u64, [u64; 2]), Vec<&SearchHit>> = BTreeMap::new();
    for h in hits {
        blocks.entry((h.q, class_of(h))).or_default().push(h);
    }
    let p2 = p * p;
    let mut out = String::new();
    for ((q, class), rows) in &blocks {
        let g = &grids[q];
        if !out.is_empty() {
            out.push('\n');
        }
        writeln!(
            out,
            "p = {p}, q = {q}: (m0 mod {}, n0 mod {}), class ({}, {}) mod {}",
            g.m_modulus, g.n_modulus, class[0], class[1], g.q_period
        )
        .unwrap();
        writeln!(out, "{:>6} {:>6}", "m0", "n0").unwrap();
        for h in rows {
            writeln!(out, "{:>6} {:>6}", h.m0, h.n0).unwrap();
        }
        writeln!(out, "\n{:>6} {:>14}", "m0", format!("2F/L mod {p2}")).unwrap();
        for h in rows {
            writeln!(out, "{:>6} {:>14}", h.m0, h.ratio_residue).unwrap();
        }
        let mut by_n = rows.clone();
        by_n.sort_by_key(|h| h.n0);
        writeln!(out, "\n{:>6} {:>14}", "n0", format!("F mod {p2}")).unwrap();
        for h in by_n {
            writeln!(out, "{:>6} {:>14}", h.n0, h.f_residue).unwrap();
        }
    }
    if blocks.is_empty() {
        out.push_str("no residue classes\n");
    }
    out
}

fn certificate_text(doc: &CertificateDocument) -> String {
    let mut out = String::new();
    let verdict = match &doc.failure {
        None => "PASS".to_string(),
        Some(f) => format!("FAIL at {f}"),
    };
    let coeffs = |v: &[u64]| format!("{v:?}");
    writeln!(out, "certificate p = {}, (m0, n0) = ({}, {}), q = {}: {verdict}", doc.p, doc.m0, doc.n0, doc.q)
        .unwrap();
    writeln!(out, "  unit            t = {}, b = {}", doc.t, doc.b).unwrap();
    writeln!(out, "  N_q             {}", doc.nq).unwrap();
    writeln!(out, "  least n         {}", doc.least_family_n).unwrap();
    writeln!(
        out,
        "  condition (i)   {} (witness {} mod p², norm gap ≡ 0 mod p⁵: {})",
        doc.condition_i.holds, doc.condition_i.witness, doc.condition_i.norm_gap_mod_p5
    )
    .unwrap();
    writeln!(out, "  quartic mod q   {}", coeffs(&doc.quartic_mod_q)).unwrap();
    let level = doc.condition_ii.level.map_or("none".into(), |l| l.to_string());
    writeln!(out, "  level i         {level}").unwrap();
    let roots: Vec<String> = doc.condition_ii.roots.iter().map(|r| coeffs(r)).collect();
    writeln!(out, "  roots           {}", if roots.is_empty() { "none".into() } else { roots.join(" ") })
        .unwrap();
    let root = doc.condition_ii.root.as_ref().map_or("none".into(), |r| coeffs(r));
    writeln!(out, "  non-pth root    {root}").unwrap();
    out
}

fn cmd_certify(p: u64, m0: i64, n0: i64, q: u64, output: Option<PathBuf>, text: bool) -> Run {
    let cert = family::certify(p, m0, n0, q)?;
    let doc = CertificateDocument::from_certificate(&cert);
    let rendered = json(&doc);
    if let Some(path) = output {
        std::fs::write(&path, &rendered)
            .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
    }
    let text = if text { certificate_text(&doc) } else { rendered };
    Ok(Output { text, ok: doc.passed })
}

fn cmd_verify(p: u64, suite: Suite, opts: &suites::Options, text: bool) -> Run {
    let report = suites::run(p, suite, opts)?;
    let ok = report.violations.is_empty();
    let text = if text {
        let mut out = format!(
            "{:?} suite, p = {p} ({}): {} checks, {} violations\n",
            suite,
            report.scope,
            report.checks,
            report.violations.len()
        );
        for v in &report.violations {
            writeln!(out, "  {v}").unwrap();
        }
        out
    } else {
        json(&report)
    };
    Ok(Output { text, ok })
}

#[derive(Serialize)]
struct FactorDoc {
    prime: u64,
    exponent: u32,
}

#[derive(Serialize)]
struct DiscDoc {
    p: u64,
    m: i64,
    n: i64,
    d: String,
    digits: usize,
    /// `Q(√D)` or `Q(√pD)` for `K` and `K'`.
    k: &'static str,
    k_prime: &'static str,
    trial_bound: u64,
    factors: Vec<FactorDoc>,
    cofactor: String,
}

fn kind(k: DiscKind) -> &'static str {
    match k {
        DiscKind::D => "D",
        DiscKind::PD => "pD",
    }
}

fn cmd_disc(p: u64, m: i64, n: i64, trial_bound: u64, text: bool) -> Run {
    let u = fundamental_unit(p)?;
    let d = family::d_value(&u.t, &u.b, m, n)?;
    let label = family::field_pair_label(n)?;
    let (factors, cofactor) = arith::trial_factor(&d, trial_bound);
    let doc = DiscDoc {
        p,
        m,
        n,
        digits: d.abs().to_string().len(),
        d: d.to_string(),
        k: kind(label.k),
        k_prime: kind(label.k_prime),
        trial_bound,
        factors: factors.iter().map(|&(prime, exponent)| FactorDoc { prime, exponent }).collect(),
        cofactor: cofactor.to_string(),
    };
    let text = if text {
        let fs: Vec<String> =
            factors.iter().map(|&(q, e)| if e == 1 { q.to_string() } else { format!("{q}^{e}") }).collect();
        format!(
            "D_{{{m},{n}}} = {}\n  digits    {}\n  K, K'     Q(√{}), Q(√{})\n  factors   {}\n  cofactor  {}\n",
            doc.d,
            doc.digits,
            doc.k,
            doc.k_prime,
            if fs.is_empty() { "none".into() } else { fs.join(" · ") },
            doc.cofactor
        )
    } else {
        json(&doc)
    };
    Ok(Output { text, ok: true })
}

#[derive(Serialize)]
struct CheckDoc {
    file: String,
    reproduces: bool,
    mismatched_checks: Vec<&'static str>,
    passed: bool,
    failure: Option<String>,
}

fn cmd_check(path: &PathBuf, text: bool) -> Run {
    let raw = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    let doc: CertificateDocument = serde_json::from_str(&raw)
        .map_err(|e| Failure::Usage(format!("{} is not a certificate document: {e}", path.display())))?;
    let cert = doc.to_certificate().map_err(Failure::Usage)?;
    let mut mismatched: Vec<&'static str> = cert.verify()?.into_iter().map(|c| c.name()).collect();
    // the recorded verdict must match a replay too
    let replay = CertificateDocument::from_certificate(&family::certify(cert.p, cert.m0, cert.n0, cert.q)?);
    let same = CertificateDocument { tool: replay.tool.clone(), ..doc.clone() } == replay;
    if !same && mismatched.is_empty() {
        mismatched.push("document");
    }
    let reproduces = mismatched.is_empty();
    let report = CheckDoc {
        file: path.display().to_string(),
        reproduces,
        mismatched_checks: mismatched,
        passed: doc.passed,
        failure: doc.failure.clone(),
    };
    let ok = reproduces && doc.passed;
    let text = if text {
        let verdict = match (reproduces, doc.passed) {
            (true, true) => "certificate reproduces and passes".to_string(),
            (true, false) => {
                format!("certificate reproduces but fails at {}", doc.failure.as_deref().unwrap_or("?"))
            }
            (false, _) => format!("certificate does not reproduce: {}", report.mismatched_checks.join(", ")),
        };
        format!("{}: {verdict}\n", report.file)
    } else {
        json(&report)
    };
    Ok(Output { text, ok })
}
