use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cyclicpair")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn golden(name: &str) -> String {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()))
}

fn assert_golden(args: &[&str], name: &str, code: i32) {
    let o = run(args);
    assert_eq!(o.status.code(), Some(code), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(stdout(&o), golden(name), "{args:?} differs from {name}");
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("cyclicpair-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn unit_goldens() {
    assert_golden(&["unit", "13"], "unit_13.json", 0);
    assert_golden(&["unit", "5"], "unit_5.json", 0);
    let v: Value = serde_json::from_str(&golden("unit_13.json")).unwrap();
    assert_eq!((v["p"].as_u64(), v["t"].as_str(), v["b"].as_str()), (Some(13), Some("3"), Some("1")));
}

#[test]
fn unit_rejects_wrong_residue() {
    let o = run(&["unit", "7"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("5 (mod 8)"));
}

#[test]
fn search_tables() {
    assert_golden(&["search", "5", "--q", "11", "--emit-tables"], "search_5_q11_tables.txt", 0);
    assert_golden(
        &["search", "5", "--q", "11", "--seed", "7,31", "--emit-tables"],
        "search_5_q11_seed_7_31.txt",
        0,
    );
    assert_golden(
        &["search", "13", "--q", "53", "--seed", "15,55", "--emit-tables"],
        "search_13_q53_seed_15_55.txt",
        0,
    );
    // the reference rows appear verbatim in the class block
    let t1 = golden("search_5_q11_seed_7_31.txt");
    for row in ["     7     31", "    17     11", "    27     91", "    37     71", "    47     51"] {
        assert!(t1.contains(row), "{row}");
    }
}

#[test]
fn search_json() {
    assert_golden(&["search", "5", "--q", "11"], "search_5_q11.json", 0);
    assert_golden(&["search", "5", "--q", "61", "--m0", "1"], "search_5_q61_m0_1.json", 0);
}

#[test]
fn search_example_classes() {
    let o = run(&["search", "5", "--q", "61"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let pairs: Vec<(u64, u64)> = v["hits"]
        .as_array()
        .unwrap()
        .iter()
        .map(|h| (h["m0"].as_u64().unwrap(), h["n0"].as_u64().unwrap()))
        .collect();
    for n0 in [97, 103, 197, 203] {
        assert!(pairs.contains(&(1, n0)), "(1, {n0})");
    }
    assert_eq!(v["grids"][0]["nq"].as_u64(), Some(300));
}

#[test]
fn search_is_deterministic_and_order_free() {
    let a = run(&["search", "5", "--q", "11,61"]);
    let b = run(&["search", "5", "--q", "61,11"]);
    let c = run(&["search", "5", "--q", "11,61"]);
    assert_eq!(a.stdout, c.stdout);
    let (va, vb): (Value, Value) =
        (serde_json::from_slice(&a.stdout).unwrap(), serde_json::from_slice(&b.stdout).unwrap());
    assert_eq!(va["hits"], vb["hits"]);
}

#[test]
fn certify_goldens() {
    assert_golden(&["certify", "13", "15", "55", "53"], "certify_13_15_55_53.json", 0);
    assert_golden(&["certify", "5", "1", "97", "61"], "certify_5_1_97_61.json", 0);
    assert_golden(&["certify", "5", "7", "33", "11"], "certify_5_7_33_11.json", 1);
    let v: Value = serde_json::from_str(&golden("certify_5_7_33_11.json")).unwrap();
    assert_eq!(v["failure"].as_str(), Some("condition_i"));
    let v: Value = serde_json::from_str(&golden("certify_13_15_55_53.json")).unwrap();
    assert_eq!(v["schema_version"].as_str(), Some("1"));
    assert_eq!(v["condition_ii"]["level"].as_u64(), Some(1));
    assert_eq!(v["condition_ii"]["roots"], serde_json::json!([[22], [24], [41], [42]]));
}

#[test]
fn certify_domain_errors() {
    assert_eq!(run(&["certify", "5", "1", "97", "5"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "5", "2", "97", "61"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "7", "1", "97", "61"]).status.code(), Some(2));
    assert_eq!(run(&["certify", "5", "1"]).status.code(), Some(2));
}

#[test]
fn check_replays_documents() {
    let path = scratch("p13.json");
    let o = run(&["certify", "13", "15", "55", "53", "-o", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), o.stdout);
    let c = run(&["check", path.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(0), "{}", stdout(&c));
    let v: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(v["reproduces"], Value::Bool(true));

    // a failing certificate reproduces but does not pass
    let failing = scratch("failing.json");
    std::fs::write(&failing, golden("certify_5_7_33_11.json")).unwrap();
    let c = run(&["check", failing.to_str().unwrap()]);
    assert_eq!(c.status.code(), Some(1));
    let v: Value = serde_json::from_slice(&c.stdout).unwrap();
    assert_eq!(v["reproduces"], Value::Bool(true));
}

#[test]
fn check_rejects_tampering() {
    let doc: Value = serde_json::from_str(&golden("certify_13_15_55_53.json")).unwrap();
    let edits: [(&str, Value); 4] = [
        ("/condition_ii/root", serde_json::json!([24])),
        ("/condition_i/witness", serde_json::json!(1)),
        ("/quartic_mod_q/1", serde_json::json!(31)),
        ("/least_family_n", serde_json::json!(57)),
    ];
    for (i, (pointer, value)) in edits.into_iter().enumerate() {
        let mut bad = doc.clone();
        *bad.pointer_mut(pointer).unwrap() = value;
        let path = scratch(&format!("tampered-{i}.json"));
        std::fs::write(&path, serde_json::to_string(&bad).unwrap()).unwrap();
        let c = run(&["check", path.to_str().unwrap()]);
        assert_eq!(c.status.code(), Some(1), "{pointer}");
        let v: Value = serde_json::from_slice(&c.stdout).unwrap();
        assert_eq!(v["reproduces"], Value::Bool(false), "{pointer}");
    }
    let junk = scratch("junk.json");
    std::fs::write(&junk, "{\"schema_version\": \"1\"}").unwrap();
    assert_eq!(run(&["check", junk.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["check", "/nonexistent/cert.json"]).status.code(), Some(2));
}

#[test]
fn disc_goldens() {
    assert_golden(&["disc", "13", "15", "55"], "disc_13_15_55.json", 0);
    assert_golden(&["disc", "5", "1", "97"], "disc_5_1_97.json", 0);
    assert_golden(&["disc", "5", "1", "1"], "disc_5_1_1.json", 0);
    let v: Value = serde_json::from_str(&golden("disc_13_15_55.json")).unwrap();
    assert_eq!(v["d"].as_str(), Some("-35297949870282964311195913270006746882588864"));
    let small: Vec<(u64, u64)> = v["factors"]
        .as_array()
        .unwrap()
        .iter()
        .map(|f| (f["prime"].as_u64().unwrap(), f["exponent"].as_u64().unwrap()))
        .collect();
    assert_eq!(small, [(2, 6), (3, 2), (13, 2), (61, 1), (109, 1), (131, 1), (211, 1), (1063, 1)]);
    assert_eq!(serde_json::from_str::<Value>(&golden("disc_5_1_1.json")).unwrap()["d"].as_str(), Some("1"));
}

#[test]
fn verify_suites_pass() {
    for (p, suite) in
        [("5", "identities"), ("13", "gauss"), ("13", "lemma47"), ("29", "periods"), ("53", "identities")]
    {
        let o = run(&["verify", p, "--suite", suite]);
        assert_eq!(o.status.code(), Some(0), "{p} {suite}: {}", stdout(&o));
        let v: Value = serde_json::from_slice(&o.stdout).unwrap();
        assert_eq!(v["violations"], serde_json::json!([]));
        assert!(v["checks"].as_u64().unwrap() > 0);
    }
    let o = run(&["verify", "5", "--suite", "curves", "--max-order", "200"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(run(&["verify", "5", "--suite", "nonsense"]).status.code(), Some(2));
}

#[test]
fn text_output() {
    let o = run(&["--text", "disc", "13", "15", "55"]);
    assert!(stdout(&o).contains("2^6 · 3^2 · 13^2 · 61 · 109 · 131 · 211 · 1063"));
    let o = run(&["certify", "5", "7", "33", "11", "--text"]);
    assert!(stdout(&o).contains("FAIL at condition_i"));
}
