mod common;

use std::process::Command;

use common::scenario_path;

fn covsim() -> Command {
    Command::new(env!("CARGO_BIN_EXE_covsim"))
}

#[test]
fn run_writes_every_artifact() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n);
    let out = covsim()
        .args(["run", scenario_path("fig8.scenario").to_str().unwrap(), "--seed", "4"])
        .arg("--out")
        .arg(p("trace.jsonl"))
        .arg("--metrics")
        .arg(p("metrics.csv"))
        .args(["--svg-at", "1.0", "--svg-out"])
        .arg(p("snap.svg"))
        .arg("--bsm-log")
        .arg(p("bsm.bin"))
        .arg("--dump-clouds")
        .arg(p("clouds"))
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let trace = std::fs::read_to_string(p("trace.jsonl")).unwrap();
    assert_eq!(trace.lines().count(), 200, "one record per step after the initial state");
    let csv = std::fs::read_to_string(p("metrics.csv")).unwrap();
    assert!(csv.starts_with("metric,host_id,value"));
    assert!(std::fs::read_to_string(p("snap.svg")).unwrap().contains("</svg>"));
    let log = std::fs::read(p("bsm.bin")).unwrap();
    assert!(!log.is_empty() && log.len() % 43 == 0, "39-byte records behind 4-byte lengths");
    assert!(std::fs::read_dir(p("clouds")).unwrap().count() > 0);
}

#[test]
fn validate_accepts_shipped() {
    let st = covsim().args(["validate", scenario_path("fig7.scenario").to_str().unwrap()]).status().unwrap();
    assert!(st.success());
}

#[test]
fn bad_scenario_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.scenario");
    std::fs::write(&bad, r#"{"dt": "fast"}"#).unwrap();
    for sub in ["validate", "run"] {
        let mut cmd = covsim();
        cmd.arg(sub).arg(&bad);
        if sub == "run" {
            cmd.arg("--out").arg(dir.path().join("t.jsonl"));
        }
        let out = cmd.output().unwrap();
        assert_eq!(out.status.code(), Some(2), "{sub}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let missing = covsim().args(["validate", "/nonexistent/x.scenario"]).status().unwrap();
    assert_eq!(missing.code(), Some(2));
}

#[test]
fn svg_time_outside_run_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = covsim()
        .args(["run", scenario_path("fig8.scenario").to_str().unwrap()])
        .arg("--out")
        .arg(dir.path().join("t.jsonl"))
        .args(["--svg-at", "99", "--svg-out"])
        .arg(dir.path().join("s.svg"))
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn svg_flags_come_in_pairs() {
    let st = covsim()
        .args(["run", scenario_path("fig8.scenario").to_str().unwrap(), "--out", "/tmp/x", "--svg-at", "1"])
        .output()
        .unwrap();
    assert!(!st.status.success());
}
