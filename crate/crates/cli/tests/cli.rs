use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn covlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_covlab")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

/// Value of `key` in a `--format records` report.
fn field(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}=")))
        .unwrap_or_else(|| panic!("no `{key}` in\n{report}"))
        .to_string()
}

const TRIANGLE: &str = "2 2 3 3\npredicate 2\n01\n10\n0 1 00 1/3\n1 2 00 1/3\n0 2 00 1/3\n";
const PRODUCT: &str = "1 2 2\n0 0 1/4\n0 1 1/4\n1 0 1/4\n1 1 1/4\n";

#[test]
fn cover_triangle_is_two() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let out = covlab(&["cover", s(&tri)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("nu = 2\n"));
}

#[test]
fn budget_exceeded_exits_two() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    assert_eq!(covlab(&["--budget", "3", "cover", s(&tri)]).status.code(), Some(2));
}

#[test]
fn invalid_configuration_exits_three() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    assert_eq!(covlab(&["--budget", "0", "cover", s(&tri)]).status.code(), Some(3));
    assert_eq!(covlab(&["cover", "/nonexistent/file"]).status.code(), Some(3));
    assert_eq!(covlab(&["frobnicate"]).status.code(), Some(3));
    let bad = write(&dir, "bad.txt", "2 2 3 1\npredicate 1\n01\n0 7 00 1\n");
    assert_eq!(covlab(&["cover", s(&bad)]).status.code(), Some(3));
    assert_eq!(covlab(&["--help"]).status.code(), Some(0));
}

fn source(dir: &TempDir, kind: &str) -> PathBuf {
    let path = dir.path().join(format!("{kind}.lc"));
    let out = covlab(&[
        "--seed", "5", "--out", s(&path), "lc-gen", "--kind", kind, "--left", "2", "--right", "2", "--labels", "2",
        "--degree", "1",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    path
}

#[test]
fn sample_mode_requires_seed() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "unique-consistent");
    assert_eq!(covlab(&["reduce", "t3", s(&lc), "--eps", "1/4", "--sample", "10"]).status.code(), Some(3));
    let a = covlab(&["--seed", "9", "reduce", "t3", s(&lc), "--eps", "1/4", "--sample", "10"]);
    let b = covlab(&["--seed", "9", "reduce", "t3", s(&lc), "--eps", "1/4", "--sample", "10"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(stdout(&a).starts_with("# sampled, not exact\n"));
}

#[test]
fn rho_of_product_space_is_zero() {
    let dir = TempDir::new().unwrap();
    let sp = write(&dir, "prod.txt", PRODUCT);
    let out = stdout(&covlab(&["--format", "records", "rho", s(&sp)]));
    assert_eq!(field(&out, "rho").parse::<f64>().unwrap(), 0.0);
    assert_eq!(field(&out, "paths_agree"), "true");
}

#[test]
fn generated_files_round_trip_through_consumers() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "unique-consistent");
    for (test, params) in [("t1", vec![]), ("t2", vec!["--eps", "1/4"]), ("t3", vec!["--eps", "1/8"])] {
        let inst = dir.path().join(format!("{test}.csp"));
        let wit = dir.path().join(format!("{test}.cover"));
        let mut reduce = vec!["--out", s(&inst), "reduce", test, s(&lc)];
        reduce.extend(&params);
        assert_eq!(covlab(&reduce).status.code(), Some(0));
        let mut witness = vec!["--out", s(&wit), "witness", test, s(&lc)];
        witness.extend(&params);
        assert_eq!(covlab(&witness).status.code(), Some(0));
        let frac = stdout(&covlab(&["--format", "records", "fraction", s(&inst), s(&wit)]));
        assert_eq!(field(&frac, "union"), "1/1", "{test}");
        let mut decode = vec!["--seed", "1", "--format", "records", "decode", test, s(&lc), "--assignment", s(&wit)];
        decode.extend(&params);
        let dec = covlab(&decode);
        assert_eq!(dec.status.code(), Some(0), "{}", String::from_utf8_lossy(&dec.stderr));
        assert!(stdout(&dec).contains("value="));
    }
}

#[test]
fn decode_requires_seed() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "unique-consistent");
    let wit = dir.path().join("w.cover");
    covlab(&["--out", s(&wit), "witness", "t3", s(&lc), "--eps", "1/4"]);
    assert_eq!(covlab(&["decode", "t3", s(&lc), "--eps", "1/4", "--assignment", s(&wit)]).status.code(), Some(3));
}

#[test]
fn rejection_identity_on_t2_witness() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "unique-consistent");
    let inst = dir.path().join("t2.csp");
    let wit = dir.path().join("t2.cover");
    covlab(&["--out", s(&inst), "reduce", "t2", s(&lc), "--eps", "1/4"]);
    covlab(&["--out", s(&wit), "witness", "t2", s(&lc), "--eps", "1/4"]);
    let out = stdout(&covlab(&["--format", "records", "reject-id", s(&inst), s(&wit)]));
    assert_eq!(field(&out, "t"), "2");
    assert_eq!(field(&out, "deviation"), "0/1");
    assert_eq!(field(&out, "lhs"), "0/1");
    assert!(!field(&out, "below_threshold").is_empty());
}

#[test]
fn output_is_deterministic() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "dto1-random");
    let again = source(&dir, "dto1-random");
    assert_eq!(fs::read(&lc).unwrap(), fs::read(&again).unwrap());
    let a = covlab(&["--seed", "2", "reduce", "t1", s(&lc), "--sample", "25"]);
    let b = covlab(&["--seed", "2", "reduce", "t1", s(&lc), "--sample", "25"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn records_and_human_formats() {
    let dir = TempDir::new().unwrap();
    let tri = write(&dir, "tri.txt", TRIANGLE);
    let human = stdout(&covlab(&["mis", s(&tri)]));
    let records = stdout(&covlab(&["--format", "records", "mis", s(&tri)]));
    assert!(human.contains("fraction = 1/3\n"));
    assert_eq!(field(&records, "fraction"), "1/3");
}

#[test]
fn support_cap_exits_two() {
    let dir = TempDir::new().unwrap();
    let lc = source(&dir, "unique-consistent");
    let out = covlab(&["--max-support", "10", "reduce", "t3", s(&lc), "--eps", "1/4"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("cap"));
}
