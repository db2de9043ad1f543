//! End-to-end tests of the command-line interface: output schemas, exit
//! codes, and the documented subcommand behaviors.

use std::path::PathBuf;
use std::process::{Command, Output};

fn momerit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_momerit"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).to_string()
}

fn tmp_dir(tag: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("momerit-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

/// Parse a named column of a simple CSV (no quoted fields in numeric columns).
fn column(csv: &str, name: &str) -> Vec<String> {
    let mut lines = csv.lines();
    let header: Vec<&str> = lines.next().unwrap().split(',').collect();
    let idx = header
        .iter()
        .position(|h| *h == name)
        .unwrap_or_else(|| panic!("column {name} in {header:?}"));
    lines
        .filter(|l| !l.trim().is_empty())
        .map(|l| l.split(',').nth(idx).unwrap().to_string())
        .collect()
}

#[test]
fn eval_abs_known_values() {
    let out = momerit(&[
        "eval",
        "--builtin",
        "paper-abs",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points",
        "0,0.5,2",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = stdout(&out);
    let values: Vec<f64> = column(&csv, "value")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(values.len(), 3);
    assert!(values[0].abs() < 1e-8);
    assert!((values[1] - 0.375).abs() < 1e-8);
    assert!((values[2] - 0.5).abs() < 1e-8);
}

#[test]
fn eval_negsq_linearized_merit_at_origin() {
    let out = momerit(&[
        "eval",
        "--builtin",
        "paper-negsq",
        "--kind",
        "w_ell",
        "--ell",
        "1",
        "--points",
        "0",
    ]);
    assert!(out.status.success());
    let v: f64 = column(&stdout(&out), "value")[0].parse().unwrap();
    assert!(v.abs() < 1e-8);
}

#[test]
fn eval_unknown_builtin_is_usage_error() {
    let out = momerit(&[
        "eval",
        "--builtin",
        "nope",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(64));
    assert!(String::from_utf8_lossy(&out.stderr).contains("unknown builtin"));
}

#[test]
fn eval_requires_points_source() {
    let out = momerit(&["eval", "--builtin", "paper-abs", "--kind", "u_ell", "--ell", "1"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn eval_unsupported_kind_rows_exit_two() {
    // u_ell needs declared convexity; the row carries the error and the
    // command exits 2.
    let out = momerit(&[
        "eval",
        "--builtin",
        "paper-negsq",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points",
        "0,1",
    ]);
    assert_eq!(out.status.code(), Some(2));
    let csv = stdout(&out);
    let errors = column(&csv, "error");
    assert!(errors.iter().all(|e| e.contains("convexity")));
}

#[test]
fn eval_parallel_jobs_match_serial() {
    let serial = momerit(&[
        "eval",
        "--builtin",
        "quadpair-2d",
        "--kind",
        "w_ell",
        "--ell",
        "1",
        "--sample-points",
        "6",
        "--seed",
        "3",
    ]);
    let parallel = momerit(&[
        "eval",
        "--builtin",
        "quadpair-2d",
        "--kind",
        "w_ell",
        "--ell",
        "1",
        "--sample-points",
        "6",
        "--seed",
        "3",
        "--jobs",
        "3",
    ]);
    assert!(serial.status.success() && parallel.status.success());
    assert_eq!(stdout(&serial), stdout(&parallel));
}

#[test]
fn eval_from_spec_document() {
    let dir = tmp_dir("spec");
    let spec_path = dir.join("problem.json");
    let spec = momerit_core::zoo::builtin("abs-quad-1d").unwrap().spec;
    std::fs::write(&spec_path, spec.to_json()).unwrap();
    let out = momerit(&[
        "eval",
        "--spec",
        spec_path.to_str().unwrap(),
        "--kind",
        "w_ell",
        "--ell",
        "1",
        "--points",
        "0",
    ]);
    assert!(out.status.success());
    let v: f64 = column(&stdout(&out), "value")[0].parse().unwrap();
    assert!(v.abs() < 1e-7);
}

#[test]
fn missing_spec_file_is_file_error() {
    let out = momerit(&[
        "eval",
        "--spec",
        "/definitely/not/here.json",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(66));
}

#[test]
fn malformed_spec_is_data_error() {
    let dir = tmp_dir("badspec");
    let spec_path = dir.join("bad.json");
    std::fs::write(&spec_path, "{\"dimension\": 1,").unwrap();
    let out = momerit(&[
        "eval",
        "--spec",
        spec_path.to_str().unwrap(),
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points",
        "0",
    ]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn sweep_is_monotone_and_ratio_bounded() {
    let out = momerit(&[
        "sweep",
        "--builtin",
        "paper-abs",
        "--kind",
        "w_ell",
        "--ell-grid",
        "1,2,4",
        "--points",
        "0.5",
    ]);
    assert!(out.status.success());
    let csv = stdout(&out);
    let ells: Vec<f64> = column(&csv, "ell").iter().map(|v| v.parse().unwrap()).collect();
    let values: Vec<f64> = column(&csv, "value")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(ells, vec![1.0, 2.0, 4.0]);
    assert!((values[0] - 0.375).abs() < 1e-8);
    // Nonincreasing in ell, and the scaling ratio bound holds row to row.
    for k in 1..values.len() {
        assert!(values[k] <= values[k - 1] + 1e-9);
        assert!(values[k - 1] <= ells[k] / ells[k - 1] * values[k] + 1e-9);
    }
}

#[test]
fn sweep_zero_column_at_solution() {
    let out = momerit(&[
        "sweep",
        "--builtin",
        "quadpair-1d",
        "--kind",
        "u_ell",
        "--ell-grid",
        "0.5,1,2",
        "--points",
        "0.3",
    ]);
    assert!(out.status.success());
    for v in column(&stdout(&out), "value") {
        assert!(v.parse::<f64>().unwrap().abs() < 1.2e-6);
    }
}

#[test]
fn trace_converging_sequence_tends_to_zero() {
    let dir = tmp_dir("trace");
    let path = dir.join("iterates.csv");
    let mut csv = String::from("x1\n");
    // Halving steps toward the solution at 0.
    let mut x = 2.0;
    for _ in 0..12 {
        csv.push_str(&format!("{x}\n"));
        x *= 0.5;
    }
    csv.push_str("0\n");
    std::fs::write(&path, csv).unwrap();
    let out = momerit(&[
        "trace",
        "--builtin",
        "paper-abs",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points-csv",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let values: Vec<f64> = column(&stdout(&out), "value")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(values.last().unwrap().abs() <= 1.2e-6);
    assert!(values[0] > 0.4);
}

#[test]
fn trace_constant_nonsolution_stays_positive() {
    let dir = tmp_dir("trace-const");
    let path = dir.join("iterates.csv");
    std::fs::write(&path, "x1\n0.5\n0.5\n0.5\n").unwrap();
    let out = momerit(&[
        "trace",
        "--builtin",
        "paper-abs",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points-csv",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let values: Vec<f64> = column(&stdout(&out), "value")
        .iter()
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(values.iter().all(|v| (v - 0.375).abs() < 1e-8));
}

#[test]
fn trace_dimension_mismatch_is_data_error() {
    let dir = tmp_dir("trace-bad");
    let path = dir.join("iterates.csv");
    std::fs::write(&path, "x1,x2\n0.5,0.5\n").unwrap();
    let out = momerit(&[
        "trace",
        "--builtin",
        "paper-abs",
        "--kind",
        "u_ell",
        "--ell",
        "1",
        "--points-csv",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(65));
}

#[test]
fn merit_log_env_var_enables_progress_notes() {
    let out = Command::new(env!("CARGO_BIN_EXE_momerit"))
        .env("MERIT_LOG", "info")
        .args([
            "eval",
            "--builtin",
            "paper-abs",
            "--kind",
            "u_ell",
            "--ell",
            "1",
            "--points",
            "0.5",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("evaluating 1 points"));
}

#[test]
fn zoo_list_names_builtins() {
    let out = momerit(&["zoo-list"]);
    assert!(out.status.success());
    let text = stdout(&out);
    for id in momerit_core::zoo::builtin_ids() {
        assert!(text.contains(id), "missing {id}");
    }
}

#[test]
fn zoo_list_known_points_table() {
    let out = momerit(&["zoo-list", "--known", "quadpair-1d"]);
    assert!(out.status.success());
    let csv = stdout(&out);
    assert!(csv.starts_with("problem,category,x1\n"));
    assert!(csv.contains("quadpair-1d,weak_pareto,"));
    assert!(csv.contains("quadpair-1d,non_solution,"));
}

#[test]
fn verify_subset_passes_and_writes_reports() {
    let dir = tmp_dir("verify-subset");
    let out = momerit(&[
        "verify",
        "--checks",
        "SECOND_PROX,GRAD_ENVELOPE",
        "--seed",
        "5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    assert!(csv.contains("SECOND_PROX,pass"));
    assert!(csv.contains("GRAD_ENVELOPE,pass"));
    assert!(dir.join("report.txt").exists());
}

#[test]
fn verify_unknown_check_is_usage_error() {
    let out = momerit(&["verify", "--checks", "NOT_A_CHECK"]);
    assert_eq!(out.status.code(), Some(64));
}

#[test]
fn verify_corrupted_metadata_fails_with_witness() {
    // Understated Lipschitz constant: sandwich checks must catch it.
    let dir = tmp_dir("verify-corrupt");
    let mut spec = momerit_core::zoo::builtin("quadpair-1d").unwrap().spec;
    for obj in &mut spec.objectives {
        obj.metadata.lip = Some(0.5);
        obj.metadata.mu = None;
    }
    let spec_path = dir.join("corrupt.json");
    std::fs::write(&spec_path, spec.to_json()).unwrap();
    let out = momerit(&[
        "verify",
        "--spec",
        spec_path.to_str().unwrap(),
        "--checks",
        "BETWEEN_LIPSCHITZ",
        "--seed",
        "5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    let csv = std::fs::read_to_string(dir.join("report.csv")).unwrap();
    let fail_row = csv
        .lines()
        .find(|l| l.starts_with("BETWEEN_LIPSCHITZ,fail"))
        .expect("failing row present");
    assert!(fail_row.contains("corrupt.json"), "witness names the problem");
}

#[test]
fn verify_user_spec_passes_applicable_checks() {
    let dir = tmp_dir("verify-user");
    let spec = momerit_core::zoo::builtin("quadpair-1d").unwrap().spec;
    let spec_path = dir.join("ok.json");
    std::fs::write(&spec_path, spec.to_json()).unwrap();
    let out = momerit(&[
        "verify",
        "--spec",
        spec_path.to_str().unwrap(),
        "--seed",
        "5",
        "--out-dir",
        dir.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", stdout(&out));
}
