//! End-to-end CLI tests against the compiled binary: file formats, report
//! structure, determinism of builds, and the documented exit codes.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_miqodd"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawning the binary must work")
}

fn run_ok(args: &[&str]) -> serde_json::Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("reports must be valid JSON")
}

fn write_example_matrix(path: &Path) {
    let q = miqodd_core::BandedMatrix::from_dense(
        &[
            vec![4.0, -1.0, -1.0, 0.0, 0.0],
            vec![-1.0, 4.0, 0.0, -1.0, 0.0],
            vec![-1.0, 0.0, 4.0, 0.0, -1.0],
            vec![0.0, -1.0, 0.0, 4.0, -1.0],
            vec![0.0, 0.0, -1.0, -1.0, 4.0],
        ],
        2,
    )
    .unwrap();
    miqodd_io::matrix_json::write_matrix(path, &q).unwrap();
}

struct Temp {
    dir: tempfile::TempDir,
}

impl Temp {
    fn new() -> Self {
        Self { dir: tempfile::tempdir().unwrap() }
    }

    fn path(&self, name: &str) -> PathBuf {
        self.dir.path().join(name)
    }

    fn arg(&self, name: &str) -> String {
        self.path(name).display().to_string()
    }
}

#[test]
fn gen_is_seed_deterministic() {
    let t = Temp::new();
    run_ok_no_json(&["gen", "--n", "50", "--seed", "7", "--out", &t.arg("a.csv")]);
    run_ok_no_json(&["gen", "--n", "50", "--seed", "7", "--out", &t.arg("b.csv")]);
    let a = std::fs::read(t.path("a.csv")).unwrap();
    let b = std::fs::read(t.path("b.csv")).unwrap();
    assert_eq!(a, b);
    assert_eq!(miqodd_io::signal::read_signal(&t.path("a.csv")).unwrap().len(), 50);
}

fn run_ok_no_json(args: &[&str]) {
    let out = run(args);
    assert!(
        out.status.success(),
        "command {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
}

#[test]
fn build_reports_known_structure_and_is_byte_deterministic() {
    let t = Temp::new();
    write_example_matrix(&t.path("q.json"));
    let report = run_ok(&[
        "build",
        "--matrix",
        &t.arg("q.json"),
        "--epsilon",
        "0",
        "--out",
        &t.arg("d1.ddq"),
    ]);
    // Layer 5 holds 11 nodes and the terminal layer is a single node.
    let per_layer = report["diagram"]["per_layer"].as_array().unwrap();
    assert_eq!(per_layer[4]["layer"], 5);
    assert_eq!(per_layer[4]["nodes"], 11);
    assert_eq!(per_layer[5]["nodes"], 1);

    run_ok(&[
        "build",
        "--matrix",
        &t.arg("q.json"),
        "--epsilon",
        "0",
        "--out",
        &t.arg("d2.ddq"),
    ]);
    let d1 = std::fs::read(t.path("d1.ddq")).unwrap();
    let d2 = std::fs::read(t.path("d2.ddq")).unwrap();
    assert_eq!(d1, d2, "identical flags must produce byte-identical diagrams");
}

#[test]
fn solve_matches_oracle_end_to_end() {
    let t = Temp::new();
    write_example_matrix(&t.path("q.json"));
    run_ok_no_json(&["gen", "--n", "5", "--seed", "11", "--out", &t.arg("y.csv")]);
    run_ok(&[
        "build",
        "--matrix",
        &t.arg("q.json"),
        "--epsilon",
        "1e-9",
        "--out",
        &t.arg("d.ddq"),
    ]);
    let solve = run_ok(&[
        "solve",
        "--diagram",
        &t.arg("d.ddq"),
        "--signal",
        &t.arg("y.csv"),
        "--mu",
        "0.01",
        "--verify",
        "--matrix",
        &t.arg("q.json"),
    ]);
    let oracle = run_ok(&[
        "oracle",
        "--matrix",
        &t.arg("q.json"),
        "--signal",
        &t.arg("y.csv"),
        "--mu",
        "0.01",
    ]);
    assert_eq!(solve["solution"]["z"], oracle["solution"]["z"]);
    let a = solve["solution"]["objective"].as_f64().unwrap();
    let b = oracle["solution"]["objective"].as_f64().unwrap();
    assert!((a - b).abs() < 1e-9 * (1.0 + b.abs()));
    assert!(solve["solution"]["verify_discrepancy"].as_f64().unwrap() < 1e-9);
}

#[test]
fn stream_solves_every_window() {
    let t = Temp::new();
    run_ok_no_json(&["gen", "--n", "40", "--seed", "3", "--out", &t.arg("y.csv")]);
    run_ok(&[
        "build", "--filter", "movavg", "--n", "12", "--k", "2", "--lambda", "0.5",
        "--epsilon", "1e-6", "--out", &t.arg("d.ddq"),
    ]);
    let report = run_ok(&[
        "stream",
        "--diagram",
        &t.arg("d.ddq"),
        "--signal",
        &t.arg("y.csv"),
        "--width",
        "12",
        "--mu",
        "0.01",
        "--threads",
        "3",
    ]);
    assert_eq!(report["windows"], 29);
    assert_eq!(report["latency_ms"]["count"], 29);
    let sols = report["solutions"].as_array().unwrap();
    assert_eq!(sols.len(), 29);
    assert_eq!(sols[7]["window"], 7);

    // CSV form.
    let out = run(&[
        "stream",
        "--diagram",
        &t.arg("d.ddq"),
        "--signal",
        &t.arg("y.csv"),
        "--width",
        "12",
        "--mu",
        "0.01",
        "--format",
        "csv",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("window,objective,x0,support_size\n"));
    assert_eq!(text.lines().count(), 30);
}

#[test]
fn export_hull_formats() {
    let t = Temp::new();
    write_example_matrix(&t.path("q.json"));
    run_ok(&[
        "build", "--matrix", &t.arg("q.json"), "--epsilon", "0", "--out", &t.arg("d.ddq"),
    ]);
    let out = run(&["export-hull", "--diagram", &t.arg("d.ddq"), "--format", "json"]);
    assert!(out.status.success());
    let hull: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let arcs = hull["vars"]["num_arcs"].as_u64().unwrap();
    assert_eq!(hull["cones"].as_array().unwrap().len() as u64, arcs);
    assert_eq!(hull["flags"].as_array().unwrap().len(), 0);

    let out = run(&["export-hull", "--diagram", &t.arg("d.ddq"), "--format", "cone-text"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("miqodd-hull 1\n"));

    // Truncated diagrams flag the hull as inexact.
    run_ok(&["build", "--matrix", &t.arg("q.json"), "--m", "2", "--out", &t.arg("t.ddq")]);
    let out = run(&["export-hull", "--diagram", &t.arg("t.ddq")]);
    let hull: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(hull["flags"][0], "inexact_hull");
}

#[test]
fn gap_report_in_exact_regime_is_clean() {
    let t = Temp::new();
    run_ok(&[
        "build", "--filter", "diff", "--n", "10", "--k", "2", "--lambda", "1.0",
        "--epsilon", "1e-9", "--out", &t.arg("d.ddq"),
    ]);
    let report = run_ok(&[
        "gap-report",
        "--diagram",
        &t.arg("d.ddq"),
        "--filter",
        "diff",
        "--k",
        "2",
        "--lambda",
        "1.0",
        "--instances",
        "25",
        "--seed",
        "5",
        "--mu",
        "0.01",
    ]);
    assert_eq!(report["summary"]["zero_solution_gap_fraction"], 1.0);
    assert!(report["summary"]["max_objective_gap"].as_f64().unwrap() < 1e-8);
}

#[test]
fn bench_reports_build_and_latency() {
    let report = run_ok(&[
        "bench", "--filter", "movavg", "--n", "15", "--k", "2", "--lambda", "0.25",
        "--epsilon", "1e-5", "--solves", "20", "--seed", "1",
    ]);
    assert!(report["timings_ms"]["build_ms"].as_f64().unwrap() >= 0.0);
    assert_eq!(report["solve_latency_ms"]["count"], 20);
}

#[test]
fn exit_codes_follow_the_contract() {
    let t = Temp::new();

    // 2: input errors.
    let out = run(&["solve", "--diagram", "/nonexistent.ddq", "--signal", "/no.csv", "--mu", "0"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["build", "--out", &t.arg("x.ddq")]);
    assert_eq!(out.status.code(), Some(2));

    // 2: stream width not matching the diagram dimension.
    run_ok_no_json(&["gen", "--n", "20", "--seed", "1", "--out", &t.arg("y.csv")]);
    run_ok_no_json(&[
        "build", "--filter", "diff", "--n", "6", "--k", "1", "--lambda", "1.0",
        "--out", &t.arg("ok.ddq"),
    ]);
    let out = run(&[
        "stream", "--diagram", &t.arg("ok.ddq"), "--signal", &t.arg("y.csv"),
        "--width", "8", "--mu", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // 3: numerical failure (indefinite matrix passes input checks).
    let text = r#"{"n": 2, "k": 1, "bands": [[1.0, 1.0], [2.0]]}"#;
    std::fs::write(t.path("bad.json"), text).unwrap();
    let out = run(&[
        "build", "--matrix", &t.arg("bad.json"), "--epsilon", "0", "--out", &t.arg("x.ddq"),
    ]);
    assert_eq!(out.status.code(), Some(3));

    // 4: resource budget.
    write_example_matrix(&t.path("q.json"));
    let out = run(&[
        "build", "--matrix", &t.arg("q.json"), "--epsilon", "0", "--budget", "3",
        "--out", &t.arg("x.ddq"),
    ]);
    assert_eq!(out.status.code(), Some(4));
}
