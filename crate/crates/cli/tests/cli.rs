//! End-to-end tests of the `crn` binary: exit-code contract, golden outputs,
//! and byte-level determinism.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn crn() -> Command {
    Command::new(env!("CARGO_BIN_EXE_crn"))
}

fn write(dir: &TempDir, name: &str, content: &str) -> PathBuf {
    let path = dir.path().join(name);
    std::fs::write(&path, content).unwrap();
    path
}

fn run(args: &[&str]) -> Output {
    crn().args(args).output().expect("binary runs")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    crn().current_dir(dir).args(args).output().expect("binary runs")
}

fn stdout(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

struct Fixtures {
    dir: TempDir,
    fig1: PathBuf,
    fig6: PathBuf,
    ex26_n1: PathBuf,
    ex26_n2: PathBuf,
    ex48_n1: PathBuf,
    ex48_n2: PathBuf,
    abc: PathBuf,
}

fn fixtures() -> Fixtures {
    let dir = TempDir::new().unwrap();
    let fig1 = write(&dir, "fig1.crn", "2A -> A + B, k1\n2A -> 2B, k2\nA + B -> 2B, k3\n");
    let fig6 = write(&dir, "fig6.crn", "A -> B, k1\nB -> A, k2\nA -> C, k3\n");
    let ex26_n1 = write(&dir, "ex26_n1.crn", "A -> B, k1\nC -> D, k2\nC -> B, k3\n");
    let ex26_n2 = write(&dir, "ex26_n2.crn", "A -> B + C, k1\nC -> B + D, k2\nA -> C, k3\n");
    let ex48_n1 = write(&dir, "ex48_n1.crn", "A -> 0, k1\nB -> 0, k2\n");
    let ex48_n2 = write(&dir, "ex48_n2.crn", "A -> B, k3\nB -> A, k4\nA -> 0, k5\n");
    let abc = write(&dir, "abc.crn", "A <-> B, k1\nB -> C, k2\n");
    Fixtures {
        dir,
        fig1,
        fig6,
        ex26_n1,
        ex26_n2,
        ex48_n1,
        ex48_n2,
        abc,
    }
}

#[test]
fn odes_prints_figure1_system() {
    let f = fixtures();
    let out = run(&["odes", f.fig1.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "dx_A/dt = -k1*x_A^2 - 2*k2*x_A^2 - k3*x_A*x_B\n\
         dx_B/dt = k1*x_A^2 + 2*k2*x_A^2 + k3*x_A*x_B\n"
    );
}

#[test]
fn compare_equal_networks_exits_zero() {
    let f = fixtures();
    let out = run(&[
        "compare",
        f.ex26_n1.to_str().unwrap(),
        f.ex26_n2.to_str().unwrap(),
        "--trials",
        "3",
        "--seed",
        "7",
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "EQUAL\n");
}

#[test]
fn compare_different_networks_exits_one() {
    let f = fixtures();
    let out = run(&[
        "compare",
        f.fig1.to_str().unwrap(),
        f.ex26_n1.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).starts_with("NOT_EQUAL\n"));
    assert!(stdout(&out).contains("witness"));
}

#[test]
fn example_4_8_networks_compare_equal() {
    let f = fixtures();
    let out = run(&[
        "compare",
        f.ex48_n1.to_str().unwrap(),
        f.ex48_n2.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn balance_reports_certificate_with_k1() {
    let f = fixtures();
    let out = run(&["balance", f.fig6.to_str().unwrap(), "--vertex", "u3"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["k"], 1);
    assert_eq!(json["vertex"], "u3");
    assert_eq!(json["monomial"], "x_A");
    assert_eq!(json["rate"], "k3");
}

#[test]
fn balance_with_forbidden_edge_matches_paper_coloring() {
    let f = fixtures();
    let out = run(&[
        "balance",
        f.fig6.to_str().unwrap(),
        "--vertex",
        "u3",
        "--forbid",
        "E_B",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["red"], serde_json::json!({ "E_r3": 1 }));
    assert_eq!(json["blue"], serde_json::json!({ "E_C": 1 }));
}

#[test]
fn balance_without_certificate_exits_one() {
    let f = fixtures();
    let out = run(&["balance", f.fig6.to_str().unwrap(), "--vertex", "u1"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("not almost balanced"));
}

#[test]
fn brute_force_flag_agrees() {
    let f = fixtures();
    let out = run(&[
        "balance",
        f.fig6.to_str().unwrap(),
        "--vertex",
        "u3",
        "--brute",
        "--bound",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["k"], 1);
}

#[test]
fn member_contract() {
    let f = fixtures();
    let member = run(&["member", f.fig6.to_str().unwrap(), "B"]);
    assert_eq!(member.status.code(), Some(0));
    assert_eq!(stdout(&member), "MEMBER\n");

    let non_member = run(&["member", f.fig1.to_str().unwrap(), "2A"]);
    assert_eq!(non_member.status.code(), Some(1));
    assert!(stdout(&non_member).starts_with("NOT_MEMBER\n"));

    let unknown = run(&["member", f.fig6.to_str().unwrap(), "Z"]);
    assert_eq!(unknown.status.code(), Some(2));
}

#[test]
fn parse_errors_exit_two_with_location() {
    let f = fixtures();
    let bad = write(&f.dir, "bad.crn", "A -> A, k1\n");
    let out = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 1"), "stderr: {err}");
    assert!(err.contains("self-loop"), "stderr: {err}");
}

#[test]
fn validate_accepts_good_networks() {
    let f = fixtures();
    let out = run(&["validate", f.fig1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "valid\n");
}

#[test]
fn transform_chain_end_to_end() {
    let f = fixtures();
    let out = run_in(
        f.dir.path(),
        &[
            "transform",
            "fig6.crn",
            "product:3:B",
            "reactant:1:B:3",
            "degradation:3",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("A + B -> B, k1_p\n"), "stdout: {text}");
    assert!(text.contains("A -> B + C, k3_p\n"), "stdout: {text}");
    assert!(text.contains("A -> 0, k4\n"), "stdout: {text}");
}

#[test]
fn transform_precondition_failure_exits_one() {
    let f = fixtures();
    let out = run(&["transform", f.fig6.to_str().unwrap(), "product:1:C"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("step 1"), "stderr: {err}");
}

#[test]
fn transform_bad_op_exits_two() {
    let f = fixtures();
    let out = run(&["transform", f.fig6.to_str().unwrap(), "shrink:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn monomial_ideal_converse_example() {
    let f = fixtures();
    let out = run(&["monomial-ideal", f.abc.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("inconclusive"), "stdout: {text}");
    assert!(text.contains("oracle: MONOMIAL"), "stdout: {text}");

    let out = run(&["monomial-ideal", f.ex26_n1.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("<x_A, x_C>"), "stdout: {text}");
}

#[test]
fn obstructions_lists_reversible_pair() {
    let f = fixtures();
    let out = run(&["obstructions", f.abc.to_str().unwrap(), "--vertex", "u1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("reversible pair: reactions 1 and 2"));
}

#[test]
fn minimal_reactants_output() {
    let f = fixtures();
    let out = run(&["minimal-reactants", f.fig1.to_str().unwrap()]);
    assert_eq!(stdout(&out), "2A\nA + B\n");
}

#[test]
fn hypergraph_formats() {
    let f = fixtures();
    let dot = run(&["hypergraph", f.fig6.to_str().unwrap(), "--format", "dot"]);
    assert!(stdout(&dot).starts_with("graph hypergraph {"));
    let json = run(&["hypergraph", f.fig6.to_str().unwrap(), "--format", "json"]);
    let value: serde_json::Value = serde_json::from_str(&stdout(&json)).unwrap();
    assert_eq!(value["species_edges"]["E_A"][0], "u1");

    let rejected = run(&["odes", f.fig6.to_str().unwrap(), "--format", "dot"]);
    assert_eq!(rejected.status.code(), Some(2));
}

#[test]
fn gb_lists_bases_per_trial() {
    let f = fixtures();
    let out = run(&["gb", f.ex26_n1.to_str().unwrap(), "--trials", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("trial 0:"), "stdout: {text}");
    assert!(text.contains("basis: {x_A, x_C}"), "stdout: {text}");
}

#[test]
fn repeated_runs_are_byte_identical() {
    let f = fixtures();
    for args in [
        vec!["compare", f.ex26_n1.to_str().unwrap(), f.ex26_n2.to_str().unwrap(), "--format", "json"],
        vec!["gb", f.fig6.to_str().unwrap(), "--format", "json"],
        vec!["balance", f.fig6.to_str().unwrap(), "--vertex", "u3"],
        vec!["hypergraph", f.fig6.to_str().unwrap(), "--format", "json"],
    ] {
        let first = run(&args);
        let second = run(&args);
        assert_eq!(first.stdout, second.stdout, "args: {args:?}");
        assert_eq!(first.status.code(), second.status.code());
    }
}
