use std::process::{Command, Output};

use codebound::sdp::import_sdpa;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_codebound")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn bound_examples() {
    let o = run(&["bound", "--n", "10", "--m", "4", "--kind", "d", "--method", "sdp"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("170 sdp\n"), "{out}");
    assert!(out.contains("gap:"));

    let o = run(&["bound", "--n", "10", "--m", "4", "--kind", "d", "--method", "classical"]);
    assert_eq!(stdout(&o), "186 hamming\n");

    let o = run(&["bound", "--n", "5", "--m", "5", "--kind", "d", "--method", "oracle"]);
    assert_eq!(stdout(&o), "4 oracle-exact\n");
}

#[test]
fn bound_json() {
    let o = run(&["bound", "--n", "11", "--m", "4", "--kind", "r", "--method", "sdp", "--even-only", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["value"], 5);
    assert_eq!(v["method"], "sdp");
    assert_eq!(v["even_only"], true);
    assert!(v["runtime_seconds"].as_f64().unwrap() >= 0.0);
    assert!(v["detail"]["primal_residual"].is_string());
}

#[test]
fn usage_errors_exit_2() {
    for args in [
        &["bound", "--n", "10", "--kind", "d"][..],
        &["bound", "--n", "10", "--m", "4", "--kind", "x", "--method", "sdp"],
        &["bound", "--n", "10", "--m", "4", "--kind", "d", "--method", "lp"],
        &["bound", "--n", "10", "--m", "0", "--kind", "d", "--method", "hamming"],
        &["table", "--table", "3"],
        &["table", "--table", "1", "--n-range", "12..10"],
        &["table", "--table", "1", "--n-range", "30..40"],
        &["frobnicate"],
    ] {
        assert_eq!(run(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn solver_failure_exits_3() {
    let o = run(&["bound", "--n", "10", "--m", "4", "--kind", "d", "--method", "sdp", "--max-iterations", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("solver"));
}

#[test]
fn table_csv() {
    let o = run(&["table", "--table", "1", "--n-range", "10..10", "--csv"]);
    assert!(o.status.success());
    let out = stdout(&o);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[0], "n,m,kind,method,value,match");
    assert_eq!(lines[1], "10,4,d,hamming,186,yes");
    assert_eq!(lines[2], "10,4,d,sdp,170,yes");
    let sdp: Vec<&str> = lines.iter().filter(|l| l.contains(",sdp,")).map(|l| l.split(',').nth(4).unwrap()).collect();
    assert_eq!(sdp, ["170", "85", "42", "24", "12", "6"]);
}

#[test]
fn table_classical_only() {
    let o = run(&["table", "--table", "1", "--n-range", "10..12", "--skip-sdp"]);
    assert!(o.status.success());
    assert!(stdout(&o).trim_end().ends_with("PASS"));
}

#[test]
fn table_json() {
    let o = run(&["table", "--table", "2", "--n-range", "10..11", "--json"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    let got: Vec<u64> = v["rows"].as_array().unwrap().iter().map(|r| r["sdp"]["value"].as_u64().unwrap()).collect();
    assert_eq!(got, [96, 16, 174, 26, 5]);
    assert_eq!(v["sdp_ok"], true);
    assert!(v["runtime_seconds"].is_number());
}

#[test]
fn thread_cap() {
    let o = Command::new(env!("CARGO_BIN_EXE_codebound"))
        .args(["table", "--table", "2", "--n-range", "10..10", "--csv"])
        .env("CODEBOUND_THREADS", "1")
        .output()
        .unwrap();
    assert!(o.status.success());
    let o = Command::new(env!("CARGO_BIN_EXE_codebound"))
        .args(["table", "--table", "2", "--skip-sdp"])
        .env("CODEBOUND_THREADS", "0")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn export_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.dat-s");
    let b = dir.path().join("b.dat-s");
    for p in [&a, &b] {
        let o = run(&["export", "--n", "10", "--m", "4", "--kind", "d", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let p = import_sdpa(&text).unwrap();
    assert!(p.num_vars > 0);
}

#[test]
fn export_to_unwritable_path_exits_4() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("missing").join("x.dat-s");
    let o = run(&["export", "--n", "8", "--m", "4", "--kind", "d", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(4));
}
