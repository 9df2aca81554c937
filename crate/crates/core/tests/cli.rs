use std::fs;
use std::process::{Command, Output};

use tempfile::TempDir;

fn cdl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cdl"))
        .args(args)
        .env_remove("CDL_BACKEND")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write(dir: &TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

fn family_spec(dir: &TempDir, x: &str) -> String {
    write(dir, &format!("family_{}.spec", x.replace('/', "_")), &format!("kind = family\nx = {x}\n"))
}

#[test]
fn describe_family_member() {
    let dir = TempDir::new().unwrap();
    let spec = family_spec(&dir, "1/2");
    let o = cdl(&["wco", "describe", &spec]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("norm_sq=3/2"), "{text}");
    assert!(text.contains("residuals: all zero (depth 10)"), "{text}");
    assert!(text.contains("two_isometry=true"), "{text}");
}

#[test]
fn describe_all_ones() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "ones.spec", "kind = explicit\nsq = [1, 1]\ntail = ones\n");
    let o = cdl(&["wco", "describe", &spec]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("norm_sq=2 lower_sq=1 cyclic_sufficient=true"));
}

#[test]
fn describe_reports_nonzero_residual() {
    let dir = TempDir::new().unwrap();
    let spec = write(&dir, "bad.spec", "kind = explicit\nsq = [2, 0]  # w(1) = 0 with sq(0) != 1\n");
    let o = cdl(&["wco", "describe", &spec]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("first at n=0 value=1"), "{text}");
    assert!(text.contains("two_isometry=false"), "{text}");
    assert!(text.contains("cyclic_sufficient=false"), "{text}");
}

#[test]
fn malformed_inputs_exit_2() {
    let dir = TempDir::new().unwrap();
    let bad = write(&dir, "bad.spec", "kind = explicit\nsq = [1, -1]\n");
    assert_eq!(cdl(&["wco", "describe", &bad]).status.code(), Some(2));
    let garbage = write(&dir, "garbage.spec", "hello\n");
    assert_eq!(cdl(&["wco", "dual", &garbage]).status.code(), Some(2));
    assert_eq!(cdl(&["wco", "describe", "/nonexistent/spec"]).status.code(), Some(2));
    let seq = write(&dir, "seq.txt", "1\nabc\n");
    assert_eq!(cdl(&["moments", "check", &seq, "--depth", "1"]).status.code(), Some(2));
    assert_eq!(cdl(&["family", "taylor"]).status.code(), Some(2));
    assert_eq!(cdl(&["family", "scan", "--m", "5", "--xmax", "x"]).status.code(), Some(2));
    assert_eq!(cdl(&["bogus"]).status.code(), Some(2));
}

#[test]
fn dual_prints_reciprocal_tail() {
    let dir = TempDir::new().unwrap();
    let spec = family_spec(&dir, "1/2");
    let o = cdl(&["wco", "dual", &spec, "--count", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("dual sq' = [2/9, 4/9, 4/5, 5/6, ...]"), "{text}");
    assert!(text.contains("dual tail = inverse-xi(w2sq=5/4)"), "{text}");
    assert!(text.contains("h' = [2/3, 4/5, 5/6, 6/7, ...]"), "{text}");
}

#[test]
fn moments_from_file() {
    let dir = TempDir::new().unwrap();
    let ones = write(&dir, "ones.txt", &"1\n".repeat(13));
    let o = cdl(&["moments", "check", &ones, "--depth", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));

    let growing = write(&dir, "pow.txt", "1\n2\n4\n8\n16\n");
    let o = cdl(&["moments", "check", &growing, "--depth", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o).trim(), "FAIL m=1 j=0 value=-1");
}

#[test]
fn moments_from_dual() {
    let dir = TempDir::new().unwrap();
    let small = family_spec(&dir, "1/1000");
    let o = cdl(&["moments", "check", "--from-dual", &small, "--fiber", "0", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL m=5 j=0"), "{}", stdout(&o));

    let tenth = family_spec(&dir, "1/10");
    let o = cdl(&["moments", "check", "--from-dual", &tenth, "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0));
    let o = cdl(&["moments", "check", "--from-dual", &tenth, "--depth", "12"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL m=9 j=0"), "{}", stdout(&o));

    let half = family_spec(&dir, "1/2");
    let o = cdl(&["moments", "check", "--from-dual", &half, "--fiber", "1", "--mode", "stieltjes", "--depth", "5"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("PASS"));
}

#[test]
fn float_backend_from_env() {
    let dir = TempDir::new().unwrap();
    let growing = write(&dir, "pow.txt", "1\n2\n4\n8\n16\n");
    let o = Command::new(env!("CARGO_BIN_EXE_cdl"))
        .args(["moments", "check", &growing, "--depth", "1"])
        .env("CDL_BACKEND", "float")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).starts_with("FAIL m=1 j=0"));
    let o = cdl(&["moments", "check", &growing, "--depth", "1", "--backend", "float", "--tol", "-1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn family_taylor() {
    let o = cdl(&["family", "taylor", "--m", "5", "--order", "4"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "0 0 0 0 -9");
    let o = cdl(&["--decimal", "family", "taylor", "--m", "5", "--order", "4", "--coefficients"]);
    assert_eq!(stdout(&o).trim(), "0 0 0 0 -0.375000000000");
}

#[test]
fn family_scan() {
    let o = cdl(&["family", "scan", "--m", "5", "--xmax", "1/100", "--steps", "10"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("signs: ---+++++++"), "{text}");
    assert!(text.contains("negative on samples in (0, 3/1000]"), "{text}");
}

#[test]
fn family_verdict_exit_codes() {
    let o = cdl(&["family", "verdict", "--x", "1/1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verdict: counterexample confirmed"));

    let o = cdl(&["family", "verdict", "--x", "1/10"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("verdict: not confirmed"));

    let o = cdl(&["family", "verdict", "--x", "1/10", "--depth", "12"]);
    assert_eq!(o.status.code(), Some(0));

    assert_eq!(cdl(&["family", "verdict", "--x", "0"]).status.code(), Some(2));
    assert_eq!(cdl(&["family", "verdict", "--x", "-1/3"]).status.code(), Some(2));
}

#[test]
fn family_figure_to_file() {
    let dir = TempDir::new().unwrap();
    let out = dir.path().join("fig.csv");
    let o = cdl(&["family", "figure", "--xmax", "3/5", "--steps", "12", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let csv = fs::read_to_string(&out).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("x,D4,D5,D6"));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 12);
    assert!(rows[0].starts_with("0.0500000000000,"));
    for row in rows {
        let d4 = row.split(',').nth(1).unwrap();
        assert!(!d4.starts_with('-'), "{row}");
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["family", "figure", "--xmax", "1/10", "--steps", "8", "--exact"];
    assert_eq!(cdl(&args).stdout, cdl(&args).stdout);
}
