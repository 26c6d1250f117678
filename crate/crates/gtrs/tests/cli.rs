//! End-to-end tests of the `gtrs` binary: report shape, exit codes, and
//! determinism of the JSON output.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gtrs"))
}

struct Fixture {
    _dir: tempfile::TempDir,
    mat_a: PathBuf,
    mat_b: PathBuf,
    vec_a: PathBuf,
}

/// minimize 2x^2 + y^2 - 2y s.t. x^2 - y^2 - 1 <= 0, optimum -1 at (0, 1).
fn interior_fixture() -> Fixture {
    let dir = tempfile::tempdir().unwrap();
    let mat_a = dir.path().join("A.mtx");
    let mat_b = dir.path().join("B.mtx");
    let vec_a = dir.path().join("a.txt");
    fs::write(
        &mat_a,
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 2.0\n2 2 1.0\n",
    )
    .unwrap();
    fs::write(
        &mat_b,
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n2 2 -1.0\n",
    )
    .unwrap();
    // Blank lines and comments are allowed in vector files.
    fs::write(&vec_a, "# objective linear term\n0.0\n\n-1.0\n").unwrap();
    Fixture { _dir: dir, mat_a, mat_b, vec_a }
}

fn solve_args(f: &Fixture) -> Vec<String> {
    [
        "solve",
        "--A",
        f.mat_a.to_str().unwrap(),
        "--B",
        f.mat_b.to_str().unwrap(),
        "--a",
        f.vec_a.to_str().unwrap(),
        "--d",
        "-1.0",
        "--eps",
        "1e-3",
        "--delta",
        "0.1",
        "--xi",
        "0.5",
        "--seed",
        "42",
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn run(args: &[String]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

#[test]
fn solve_reports_the_optimum_with_exit_zero() {
    let f = interior_fixture();
    let mut args = solve_args(&f);
    args.push("--oracle-check".into());
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));

    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "optimal");
    assert_eq!(doc["n"], 2);
    assert_eq!(doc["nnz"], 4);
    assert!((doc["value"].as_f64().unwrap() + 1.0).abs() <= 1e-3);
    assert_eq!(doc["x"].as_array().unwrap().len(), 2);
    assert_eq!(doc["seed"], 42);
    assert_eq!(doc["config"]["eps"], 1e-3);
    let check = &doc["oracle_check"];
    assert!((check["reference_value"].as_f64().unwrap() + 1.0).abs() <= 1e-9);
    assert_eq!(check["within_eps"], true);
}

#[test]
fn reports_are_deterministic_up_to_timing() {
    let f = interior_fixture();
    let args = solve_args(&f);
    let mut first = stdout_json(&run(&args));
    let mut second = stdout_json(&run(&args));
    first.as_object_mut().unwrap().remove("elapsed_ms");
    second.as_object_mut().unwrap().remove("elapsed_ms");
    assert_eq!(first, second, "same seed must reproduce the same report");
}

#[test]
fn no_x_flag_omits_the_vector() {
    let f = interior_fixture();
    let mut args = solve_args(&f);
    args.push("--no-x".into());
    let doc = stdout_json(&run(&args));
    assert!(doc.get("x").is_none());
    assert_eq!(doc["status"], "optimal");
}

#[test]
fn json_flag_writes_the_same_report_to_a_file() {
    let f = interior_fixture();
    let path = f._dir.path().join("report.json");
    let mut args = solve_args(&f);
    args.push("--json".into());
    args.push(path.to_str().unwrap().into());
    let out = run(&args);
    let on_disk: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(stdout_json(&out), on_disk);
}

#[test]
fn positive_semidefinite_constraint_exits_two() {
    let f = interior_fixture();
    let psd = f._dir.path().join("psd.mtx");
    fs::write(
        &psd,
        "%%MatrixMarket matrix coordinate real symmetric\n2 2 2\n1 1 1.0\n2 2 2.0\n",
    )
    .unwrap();
    let mut args = solve_args(&f);
    args[4] = psd.to_str().unwrap().into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(2));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "assumption_failed");
    assert_eq!(doc["value"], Value::Null);
    assert!(doc["message"].as_str().unwrap().contains("curvature"));
}

#[test]
fn missing_file_exits_one_with_the_path() {
    let f = interior_fixture();
    let mut args = solve_args(&f);
    args[2] = "/nonexistent/gone.mtx".into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "error");
    assert!(doc["message"].as_str().unwrap().contains("/nonexistent/gone.mtx"));
}

#[test]
fn unsymmetric_matrix_market_is_rejected() {
    let f = interior_fixture();
    let general = f._dir.path().join("general.mtx");
    fs::write(
        &general,
        "%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1.0\n2 2 -1.0\n",
    )
    .unwrap();
    let mut args = solve_args(&f);
    args[4] = general.to_str().unwrap().into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "error");
    assert!(doc["message"].as_str().unwrap().contains("symmetric"));
}

#[test]
fn bounds_subcommand_brackets_the_optimum() {
    let f = interior_fixture();
    let out = run(&[
        "bounds".into(),
        "--A".into(),
        f.mat_a.to_str().unwrap().into(),
        "--B".into(),
        f.mat_b.to_str().unwrap().into(),
        "--a".into(),
        f.vec_a.to_str().unwrap().into(),
        "--d".into(),
        "-1.0".into(),
        "--xi".into(),
        "0.5".into(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "ok");
    let lower = doc["lower"].as_f64().unwrap();
    let upper = doc["upper"].as_f64().unwrap();
    assert!(lower <= -1.0 && -1.0 <= upper, "bracket [{lower}, {upper}] must contain -1");
    assert!(doc["mu0"].as_f64().unwrap() > 0.0);
}

#[test]
fn oracle_subcommand_solves_densely() {
    let f = interior_fixture();
    let out = run(&[
        "oracle".into(),
        "--A".into(),
        f.mat_a.to_str().unwrap().into(),
        "--B".into(),
        f.mat_b.to_str().unwrap().into(),
        "--a".into(),
        f.vec_a.to_str().unwrap().into(),
        "--d".into(),
        "-1.0".into(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["status"], "optimal");
    assert!((doc["value"].as_f64().unwrap() + 1.0).abs() <= 1e-9);
    assert_eq!(doc["active"], false);
    assert!(doc["kkt_residual"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn bench_subcommand_emits_csv() {
    let out = run(&[
        "bench".into(),
        "--sizes".into(),
        "60,120".into(),
        "--seeds".into(),
        "1".into(),
        "--degree".into(),
        "2".into(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next(),
        Some("n,nnz,seed,elapsed_ms,oracle_matvecs,oracle_matvec_work")
    );
    assert_eq!(lines.count(), 2);
}

#[test]
fn help_exits_zero() {
    let out = bin().arg("--help").output().unwrap();
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("solve"));
}

#[test]
fn vector_length_mismatch_exits_one() {
    let f = interior_fixture();
    let short = f._dir.path().join("short.txt");
    fs::write(&short, "1.0\n").unwrap();
    let mut args = solve_args(&f);
    args[6] = short.to_str().unwrap().into();
    let out = run(&args);
    assert_eq!(out.status.code(), Some(1));
    let doc = stdout_json(&out);
    assert!(doc["message"].as_str().unwrap().contains("dimension mismatch"));
}

#[test]
fn rho_overrides_are_accepted_and_echoed() {
    let f = interior_fixture();
    let mut args = solve_args(&f);
    args.extend(["--rho-a".into(), "3.0".into(), "--rho-b".into(), "1.5".into()]);
    let out = run(&args);
    assert_eq!(out.status.code(), Some(0));
    let doc = stdout_json(&out);
    assert_eq!(doc["config"]["rho_a"], 3.0);
    assert_eq!(doc["config"]["rho_b"], 1.5);
    assert!((doc["value"].as_f64().unwrap() + 1.0).abs() <= 1e-3);
}
