//! End-to-end coverage of the binary: pinned example outputs, flag grammar,
//! exit codes, output formats, and the cache directory plumbing.

use std::path::Path;
use std::process::{Command, Output};

fn sumfree(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sumfree"))
        .args(args)
        .env_remove("SUMFREE_CACHE_DIR")
        .output()
        .expect("binary runs")
}

fn sumfree_env(args: &[&str], env: &[(&str, &Path)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_sumfree"));
    cmd.args(args).env_remove("SUMFREE_CACHE_DIR");
    for (key, value) in env {
        cmd.env(key, value);
    }
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf8 stdout")
}

#[test]
fn formula_example_output() {
    let out = sumfree(&["formula", "--k", "1", "--l", "2", "--n", "7"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "lambda = 2/7 (argmax d = 7)\n");
}

#[test]
fn shifted_example_output() {
    let out = sumfree(&[
        "shifted", "--k", "1", "--l", "2", "--n", "6", "--C", "{0,1}",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "lambda^C = 1/3, witness {2,3}\n");
}

#[test]
fn verify_example_row_count() {
    let out = sumfree(&[
        "verify", "--k", "1", "--l", "3", "--from", "1", "--to", "12",
    ]);
    assert!(out.status.success());
    let lines: Vec<String> = stdout(&out).lines().map(String::from).collect();
    // Header plus one row per n.
    assert_eq!(lines.len(), 13);
}

#[test]
fn search_on_a_product_group() {
    // The coset with first coordinate 1; certified canonical by the
    // enumeration cross-checks in the core test suite.
    let out = sumfree(&["search", "--k", "1", "--l", "2", "--group", "Z_2 x Z_4"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "lambda = 1/2, witness {4,5,6,7}\n");
}

#[test]
fn witness_subcommand() {
    let out = sumfree(&["witness", "--k", "1", "--l", "2", "--n", "6"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "witness = {2,3} (density 1/3)\n");

    // l^2 - k^2 must divide n.
    let out = sumfree(&["witness", "--k", "1", "--l", "2", "--n", "7"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_one() {
    // k >= l is a contract violation.
    let out = sumfree(&["formula", "--k", "2", "--l", "2", "--n", "5"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());

    // Unknown flag.
    let out = sumfree(&["formula", "--k", "1", "--l", "2", "--n", "5", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));

    // Malformed subset literal.
    let out = sumfree(&["shifted", "--k", "1", "--l", "2", "--n", "6", "--C", "0,1"]);
    assert_eq!(out.status.code(), Some(1));

    // Malformed group literal.
    let out = sumfree(&["search", "--k", "1", "--l", "2", "--group", "D_8"]);
    assert_eq!(out.status.code(), Some(1));

    // Exactly one of --n / --group.
    let out = sumfree(&["search", "--k", "1", "--l", "2"]);
    assert_eq!(out.status.code(), Some(1));

    // Non-(1,2) pairs have no product-group formula.
    let out = sumfree(&["formula", "--k", "1", "--l", "3", "--group", "Z_2 x Z_2"]);
    assert_eq!(out.status.code(), Some(1));

    // Missing subcommand prints usage.
    let out = sumfree(&[]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    let out = sumfree(&["--help"]);
    assert!(out.status.success());
}

#[test]
fn verify_mismatch_exits_two() {
    // A cache row with a wrong oracle value is the one way to witness the
    // mismatch path end to end; a correct build never mismatches on its own.
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(
        dir.path().join("k1_l2_C0.jsonl"),
        concat!(
            r#"{"n":7,"k":1,"l":2,"formula_value":"2/7","oracle_value":"1/7","#,
            r#""shifted_value":null,"shifted_equals_bound":null,"witness":"{1}"}"#,
            "\n"
        ),
    )
    .unwrap();
    let out = sumfree(&[
        "verify",
        "--k",
        "1",
        "--l",
        "2",
        "--from",
        "7",
        "--to",
        "7",
        "--cache-dir",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("n=7"), "stderr: {err}");
}

#[test]
fn csv_and_json_formats() {
    let out = sumfree(&[
        "verify", "--k", "1", "--l", "2", "--from", "7", "--to", "7", "--format", "csv",
    ]);
    assert!(out.status.success());
    assert_eq!(
        stdout(&out),
        "n,k,l,formula,oracle,shifted,bound_eq,witness\n7,1,2,2/7,2/7,,,\"{4,6}\"\n"
    );

    let out = sumfree(&[
        "survey", "--k", "1", "--l", "2", "--from", "6", "--to", "6", "--format", "json",
    ]);
    assert!(out.status.success());
    let line = stdout(&out);
    let parsed: serde_json::Value = serde_json::from_str(line.trim()).unwrap();
    assert_eq!(parsed["n"], 6);
    assert_eq!(parsed["shifted_value"], "1/3");
    assert_eq!(parsed["shifted_equals_bound"], true);
    assert_eq!(parsed["witness"], "{2,3}");

    let out = sumfree(&[
        "search", "--k", "1", "--l", "2", "--n", "7", "--format", "json",
    ]);
    let parsed: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(parsed["group"], "Z_7");
    assert_eq!(parsed["C"], "{0}");
    assert_eq!(parsed["max_cardinality"], 2);
    assert_eq!(parsed["density"], "2/7");
    assert_eq!(parsed["complete"], true);
}

#[test]
fn shift_set_reduces_mod_n() {
    // On Z_1 the shift set {0,1} collapses to {0}.
    let out = sumfree(&[
        "shifted", "--k", "1", "--l", "2", "--n", "1", "--C", "{0,1}",
    ]);
    assert!(out.status.success());
    assert_eq!(stdout(&out), "lambda^C = 0/1, witness {}\n");
}

#[test]
fn parallel_output_is_byte_identical() {
    let serial = sumfree(&[
        "survey", "--k", "1", "--l", "2", "--from", "1", "--to", "10",
    ]);
    let parallel = sumfree(&[
        "survey",
        "--k",
        "1",
        "--l",
        "2",
        "--from",
        "1",
        "--to",
        "10",
        "--parallel",
        "4",
    ]);
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(serial.stdout, parallel.stdout);
}

#[test]
fn node_budget_reports_incomplete() {
    let out = sumfree(&[
        "search",
        "--k",
        "1",
        "--l",
        "2",
        "--n",
        "16",
        "--node-budget",
        "8",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("incomplete"));
}

#[test]
fn cache_dir_env_override() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["survey", "--k", "1", "--l", "2", "--from", "1", "--to", "4"];
    let first = sumfree_env(&args, &[("SUMFREE_CACHE_DIR", dir.path())]);
    assert!(first.status.success());
    let cache = dir.path().join("k1_l2_C0-1.jsonl");
    assert!(cache.exists());
    let written = std::fs::read_to_string(&cache).unwrap();

    // A rerun reuses the cache without rewriting it and prints identically.
    let second = sumfree_env(&args, &[("SUMFREE_CACHE_DIR", dir.path())]);
    assert_eq!(first.stdout, second.stdout);
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), written);
}
