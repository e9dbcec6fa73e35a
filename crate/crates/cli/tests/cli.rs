use std::process::{Command, Output};

use serde::Deserialize;
use tropgw::absolute::GwRecord;
use tropgw::configs::CurveConfig;
use tropgw::lattice::Rational;
use tropgw::store::{load_table, CACHE_FILE};

fn tropgw(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tropgw"))
        .args(args)
        .env_remove("TROPGW_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[derive(Deserialize)]
struct Entry {
    gamma: CurveConfig,
    value: Rational,
}

#[test]
fn invariant_of_double_cover() {
    let out = tropgw(&["invariant", "--gamma", "[[[2,-2]]]"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "-1/4\n");
}

#[test]
fn invariant_json_round_trips() {
    let out = tropgw(&["invariant", "--gamma", "[[[1,1],[1,-4]]]", "--json"]);
    assert!(out.status.success());
    let entry: Entry = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(entry.gamma, CurveConfig::parse_json("[[[1,-4],[1,1]]]").unwrap());
    assert_eq!(entry.value, Rational::one());
}

#[test]
fn absolute_cubics_through_eight_points() {
    let out = tropgw(&[
        "absolute",
        "--points",
        "8",
        "--genus",
        "0",
        "--class",
        "3:1,1,1,1,1,1,1,1",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "12\n");
}

#[test]
fn absolute_exceptional_class_json() {
    let out = tropgw(&[
        "absolute", "--points", "3", "--genus", "0", "--class", "0:0,0,-1", "--json",
    ]);
    assert!(out.status.success());
    let rec: GwRecord = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rec.value, Rational::one());
    assert_eq!(rec.class.to_string(), "0:0,0,-1");
}

#[test]
fn verify_default_set_succeeds() {
    let out = tropgw(&["verify", "--max-degree", "2"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out).lines().count(), 5);
}

#[test]
fn verify_explicit_vectors() {
    let out = tropgw(&[
        "verify",
        "--max-degree",
        "3",
        "--y",
        "(-1,3)",
        "--y",
        "-2,-1",
        "--min-chi",
        "-4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.starts_with("y = (-1,3): ok"));
    assert!(text.contains("y = (-2,-1): ok"));
}

#[test]
fn kontsevich_oracle() {
    let out = tropgw(&["oracle-kontsevich", "--max-degree", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1\t1\n2\t1\n3\t12\n4\t620\n");
    let out = tropgw(&["oracle-kontsevich", "--max-degree", "3", "--json"]);
    let values: Vec<Rational> = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(values, vec![Rational::from(1), Rational::from(1), Rational::from(12)]);
}

#[test]
fn table_json_round_trips() {
    let out = tropgw(&["table", "--max-degree", "2", "--min-chi", "-4", "--json"]);
    assert!(out.status.success());
    let entries: Vec<Entry> = serde_json::from_str(&stdout(&out)).unwrap();
    let double = CurveConfig::parse_json("[[[2,-2]]]").unwrap();
    let found = entries.iter().find(|e| e.gamma == double).unwrap();
    assert_eq!(found.value, Rational::new(-1, 4));
    assert!(entries.windows(2).all(|w| w[0].gamma < w[1].gamma));
}

#[test]
fn table_writes_explicit_cache() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.jsonl");
    let p = path.to_str().unwrap();
    let first = tropgw(&["table", "--max-degree", "2", "--min-chi", "-4", "--cache", p]);
    assert!(first.status.success());
    let saved = std::fs::read(&path).unwrap();
    let table = load_table(&path).unwrap();
    assert_eq!(table.bounds(), Some((2, -4)));
    let second = tropgw(&["table", "--max-degree", "2", "--min-chi", "-4", "--cache", p]);
    assert_eq!(stdout(&first), stdout(&second));
    assert_eq!(std::fs::read(&path).unwrap(), saved);
}

#[test]
fn cache_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = Command::new(env!("CARGO_BIN_EXE_tropgw"))
        .args(["invariant", "--gamma", "[[[3,-3]]]"])
        .env("TROPGW_CACHE_DIR", dir.path())
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "1/9\n");
    let table = load_table(&dir.path().join(CACHE_FILE)).unwrap();
    assert_eq!(
        table.get(&CurveConfig::parse_json("[[[3,-3]]]").unwrap()),
        Some(&Rational::new(1, 9))
    );
}

#[test]
fn corrupt_cache_is_a_computation_error() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join(CACHE_FILE), "not json\n").unwrap();
    let out = tropgw(&[
        "--cache-dir",
        dir.path().to_str().unwrap(),
        "invariant",
        "--gamma",
        "[[[1,-1]]]",
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
}

#[test]
fn usage_errors_exit_with_two() {
    for args in [
        vec!["invariant", "--gamma", "[[[0,-1]]]"],
        vec!["invariant", "--gamma", "[[[1,-1]],[[1,-1]]]"],
        vec!["invariant"],
        vec!["absolute", "--points", "3", "--genus", "0", "--class", "1:1,1"],
        vec!["absolute", "--points", "0", "--genus", "0", "--class", "1:"],
        vec!["verify", "--max-degree", "2", "--y", "(-1,-2)"],
        vec!["table", "--max-degree", "-1", "--min-chi", "0"],
        vec!["frobnicate"],
    ] {
        let out = tropgw(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
    }
}
