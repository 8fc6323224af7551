//! End-to-end runs of the `bipp` executable.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const PARABOLA: &str = "vars: x y\nbound: x in [0,8]\nbound: y in [0,8]\nsubject to:\n  y - x^2 == 0\n";

fn bipp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bipp")).args(args).output().expect("bipp runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn raw_box_pass_count_and_trace() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "parabola.txt", PARABOLA);
    let trace = dir.path().join("trace.jsonl");
    let out = bipp(&["solve", &file, "--raw-box", "--stats", "--trace", trace.to_str().unwrap()]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["status"], "optimal");
    assert_eq!(v["counters"]["step1Passes"], 33);
    assert_eq!(v["solutions"], serde_json::json!([["0", "0"], ["1", "1"], ["2", "4"]]));
    let observed: u64 = v["stats"]["observedBoxesPerGeneration"].as_array().unwrap().iter().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(observed, v["counters"]["boxesCreated"].as_u64().unwrap());

    let records: Vec<Value> = fs::read_to_string(&trace).unwrap().lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len() as u64, observed);
    assert_eq!(records[0]["l"], serde_json::json!([0, 0]));
    assert_eq!(records[0]["k_prime"], serde_json::json!([3, 3]));
    assert_eq!(records[0]["decision"], "split");
    let accepted = records.iter().filter(|r| r["decision"] == "leaf-accept").count();
    assert_eq!(accepted, 3);
}

#[test]
fn padded_solve_reports_user_scale_optimum() {
    let dir = tempfile::tempdir().unwrap();
    let text = PARABOLA.replace("subject", "minimize: 2*x - y + 5/2\nsubject");
    let file = write(dir.path(), "p.txt", &text);
    let out = bipp(&["solve", &file]);
    assert!(out.status.success());
    let v = json(&out);
    // 2x - y + 5/2 at (0,0), (1,1), (2,4): 5/2, 7/2, 5/2
    assert_eq!(v["theta"], "5/2");
    assert_eq!(v["solutions"], serde_json::json!([["0", "0"], ["2", "4"]]));
    assert!(bipp(&["solve", &file, "--threads", "4"]).stdout.starts_with(b"{"));
    let check = bipp(&["check", &file]);
    assert!(check.status.success());
    assert_eq!(String::from_utf8_lossy(&check.stdout).trim(), "MATCH");
}

#[test]
fn infeasible_problem_exits_zero() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "p.txt", "vars: x y\nbound: x in [-5,5]\nbound: y in [-5,5]\nsubject to:\n  x^2 + y^2 == 3\n");
    let out = bipp(&["solve", &file]);
    assert!(out.status.success());
    assert_eq!(json(&out)["status"], "infeasible");
}

#[test]
fn expect_prints_exact_values() {
    let out = bipp(&["expect", "--lambda", "1/2", "--K", "2"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["expectedBoxes"], "91/16");
    assert_eq!(v["generationLambdas"], serde_json::json!(["15/16", "3/4", "1/2"]));
    let a = bipp(&["expect", "--lambda", "1/8", "--K", "6", "--simulate", "5000", "--seed", "9"]);
    let b = bipp(&["expect", "--lambda", "1/8", "--K", "6", "--simulate", "5000", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn matrices_to_file_and_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("basis.bin");
    let out = bipp(&["matrices", "--degree", "3,1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(&fs::read(&path).unwrap()[..4], b"BSUB");
    let v = json(&bipp(&["matrices", "--degree", "2"]));
    assert_eq!(v["axes"][0]["right"][0], serde_json::json!(["1/4", "1/2", "1/4"]));
}

#[test]
fn errors_exit_nonzero_with_message() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", &PARABOLA.replace("y - x^2", "y -- x"));
    let out = bipp(&["solve", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("5:6"));
    assert_eq!(bipp(&["solve", "--no-such-flag", &bad]).status.code(), Some(2));
    assert_eq!(bipp(&["solve", "/definitely/missing.txt"]).status.code(), Some(2));
    let not_dyadic = write(dir.path(), "nd.txt", &PARABOLA.replace("[0,8]\nbound: y", "[0,6]\nbound: y"));
    assert_eq!(bipp(&["solve", &not_dyadic, "--raw-box"]).status.code(), Some(2));
}

#[test]
fn degree_cap_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = write(dir.path(), "p.txt", PARABOLA);
    let capped = Command::new(env!("CARGO_BIN_EXE_bipp")).args(["solve", &file]).env("BERNSTEIN_IPP_DEGREE_CAP", "1").output().unwrap();
    assert_eq!(capped.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&capped.stderr).contains("cap"));
    let explicit = Command::new(env!("CARGO_BIN_EXE_bipp"))
        .args(["solve", &file, "--degree", "2,1"])
        .env("BERNSTEIN_IPP_DEGREE_CAP", "1")
        .output()
        .unwrap();
    assert!(explicit.status.success());
}
