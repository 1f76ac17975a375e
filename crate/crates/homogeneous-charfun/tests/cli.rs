//! The `homcheck` binary: JSON-lines output, report files and exit codes.

use std::process::Command;

fn homcheck(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_homcheck")).args(args).output().expect("spawn homcheck");
    (out.status.code().unwrap_or(-1), String::from_utf8_lossy(&out.stdout).into_owned(), String::from_utf8_lossy(&out.stderr).into_owned())
}

fn lines(stdout: &str) -> Vec<serde_json::Value> {
    stdout.lines().map(|l| serde_json::from_str(l).expect("JSON line")).collect()
}

#[test]
fn passing_run_exits_zero() {
    let (code, out, err) = homcheck(&["--check", "identities", "--check", "god", "--lambda", "2", "--mu", "1,1/2"]);
    assert_eq!(code, 0, "{err}");
    let reports = lines(&out);
    assert_eq!(reports.len(), 2);
    for r in &reports {
        assert_eq!(r["status"], "pass");
        assert_eq!(r["residual"], "exact");
        assert_eq!(r["params"]["mu"], "1,1/2");
    }
    assert!(err.contains("identities"), "summary table goes to stderr when stdout carries the report");
}

#[test]
fn failing_check_exits_one() {
    let (code, out, _) = homcheck(&["--check", "positivity", "--lambda", "5/2", "--mu", "1,1", "--tolerance", "positivity=-1"]);
    assert_eq!(code, 1);
    assert_eq!(lines(&out)[0]["status"], "fail");
}

#[test]
fn configuration_errors_exit_two() {
    for args in [
        &["--check", "no-such-check"][..],
        &["--check", "god", "--lambda", "two"][..],
        &["--check", "god", "--grid", "0.2,1.5i"][..],
        &["--check", "god", "--tolerance", "god"][..],
    ] {
        let (code, out, _) = homcheck(args);
        assert_eq!(code, 2, "{args:?}");
        let r = lines(&out);
        assert_eq!(r[0]["check"], "config");
        assert_eq!(r[0]["status"], "fail");
    }
}

#[test]
fn config_file_and_report_file() {
    let dir = std::env::temp_dir().join(format!("homcheck-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let config = dir.join("config.json");
    let report = dir.join("report.jsonl");
    std::fs::write(&config, r#"{"lambda": "3", "mu": ["1"], "checks": ["defect", "c-equation"], "truncation": 20}"#).unwrap();
    let (code, out, err) = homcheck(&["--config", config.to_str().unwrap(), "--report", report.to_str().unwrap(), "--lambda", "5/2"]);
    assert_eq!(code, 0, "{err}");
    assert!(out.contains("c-equation"), "summary table on stdout");
    let reports = lines(&std::fs::read_to_string(&report).unwrap());
    let ids: Vec<&str> = reports.iter().map(|r| r["check"].as_str().unwrap()).collect();
    assert_eq!(ids, ["defect", "c-equation"]);
    assert_eq!(reports[0]["params"]["lambda"], "5/2", "flags override the file");
    assert_eq!(reports[0]["params"]["truncation"], "20");
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn empty_selection_is_empty_report() {
    let (code, out, _) = homcheck(&[]);
    assert_eq!(code, 0);
    assert!(out.trim().is_empty());
}
