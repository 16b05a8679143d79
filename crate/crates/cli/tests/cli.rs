use std::process::{Command, Output};

use circulant::report::{InvariantResult, CSV_COLUMNS};
use circulant::sweep::SweepRow;
use circulant::VerificationReport;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_circulant"))
        .args(args)
        .env_remove("CIRCULANT_OUTPUT_DIR")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn records(o: &Output) -> Vec<InvariantResult> {
    stdout(o)
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

#[test]
fn closed_resistance_on_c5() {
    let o = run(&[
        "compute", "--n", "5", "--delete", "1", "--quantity", "resistance", "--u", "0", "--v", "2",
        "--method", "closed",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let r = records(&o);
    assert_eq!(r.len(), 1);
    assert!((r[0].value.to_f64().unwrap() - 0.8).abs() < 1e-12);
}

#[test]
fn exact_tree_count() {
    let o = run(&[
        "compute", "--n", "7", "--delete", "1", "--quantity", "trees", "--method", "closed", "--exact",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(records(&o)[0].value, circulant::Value::Exact("1183".into()));
}

#[test]
fn exit_codes() {
    let even = run(&["compute", "--n", "6", "--delete", "1", "--quantity", "trees", "--method", "closed"]);
    assert_eq!(even.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&even.stderr).contains("closed forms require odd N"));

    let shared = run(&["compute", "--n", "9", "--delete", "3", "--quantity", "trees", "--method", "closed"]);
    assert_eq!(shared.status.code(), Some(2));

    let disconnected = run(&["compute", "--n", "6", "--delete", "1,2", "--quantity", "resistance", "--q", "1"]);
    assert_eq!(disconnected.status.code(), Some(3));

    let bad_flag = run(&["compute", "--n", "5", "--quantity", "volume"]);
    assert_eq!(bad_flag.status.code(), Some(2));

    let failing = run(&["verify", "--n", "7", "--r", "1", "--tol-trees=-1"]);
    assert_eq!(failing.status.code(), Some(1));
    let report: VerificationReport = serde_json::from_str(&stdout(&failing)).unwrap();
    assert!(report.summary.failed > 0);
}

#[test]
fn emitted_records_round_trip() {
    for args in [
        vec!["compute", "--n", "9", "--delete", "2", "--quantity", "hitting", "--method", "oracle"],
        vec!["compute", "--n", "9", "--delete", "2", "--quantity", "forests", "--method", "closed", "--exact"],
        vec!["compute", "--n", "2001", "--delete", "1", "--quantity", "trees", "--method", "closed"],
        vec!["compute", "--spec", r#"{"n":6,"weights":{"1":"1/2","3":"2"}}"#, "--quantity", "kirchhoff", "--method", "oracle"],
        vec!["compute", "--n", "5", "--delete", "1", "--quantity", "hitting", "--method", "monte-carlo", "--q", "2", "--walks", "500", "--seed", "3"],
        vec!["eig", "--n", "8", "--delete", "2,4"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(0), "{args:?}");
        for line in stdout(&o).lines() {
            let parsed: InvariantResult = serde_json::from_str(line).unwrap();
            assert_eq!(serde_json::to_string(&parsed).unwrap(), line);
        }
    }
}

#[test]
fn csv_has_fixed_columns() {
    let o = run(&[
        "compute", "--n", "7", "--delete", "1", "--quantity", "resistance", "--method", "closed", "--exact",
        "--format", "csv",
    ]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), CSV_COLUMNS.join(","));
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 6);
    assert!(rows[0].starts_with("7,1,resistance,closed,1,0,1,"));
    assert!(rows[0].contains("48/91"));
}

#[test]
fn verify_examples() {
    let o = run(&["verify", "--n-min", "5", "--n-max", "15", "--odd-only"]);
    assert_eq!(o.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.all_pass());
    for c in &report.cases {
        assert!(c.max_abs_dev <= report.summary.worst_abs_dev);
        assert!(c.max_rel_dev <= report.summary.worst_rel_dev);
    }

    let o = run(&["verify", "--n", "9", "--r", "2"]);
    assert_eq!(o.status.code(), Some(0));

    let o = run(&["verify", "--n", "6", "--delete", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let report: VerificationReport = serde_json::from_str(&stdout(&o)).unwrap();
    assert!(report.summary.skipped[0].contains("closed forms require odd N"));
}

#[test]
fn sweeps() {
    let o = run(&["sweep", "--quantity", "tree-ratio", "--n-max", "2001", "--format", "csv"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let last = text.lines().last().unwrap();
    let value: f64 = last.split(',').nth(7).unwrap().parse().unwrap();
    assert!((value - 0.135335).abs() < 1e-2);

    let o = run(&["sweep", "--quantity", "resistance-scaled", "--q", "3", "--n-max", "10001"]);
    let rows: Vec<SweepRow> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!((rows.last().unwrap().value - 1.0).abs() < 1e-2);
    assert!(rows.windows(2).all(|w| w[0].n < w[1].n));
    assert!(rows.iter().all(|r| r.value.is_finite()));

    let o = run(&["sweep", "--quantity", "kirchhoff-scaled", "--n-max", "2001"]);
    let rows: Vec<SweepRow> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(rows.windows(2).all(|w| w[1].deviation <= w[0].deviation));

    let o = run(&["sweep", "--quantity", "rho-gap", "--n-max", "12", "--step", "1"]);
    assert!(String::from_utf8_lossy(&o.stderr).contains("skipped 4 even N"));
}

#[test]
fn output_file_and_env_directory() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("nested/out.jsonl");
    let o = run(&[
        "compute", "--n", "5", "--delete", "1", "--quantity", "kirchhoff", "--method", "closed", "--exact",
        "--output", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let r: InvariantResult = serde_json::from_str(text.trim()).unwrap();
    assert_eq!(r.value, circulant::Value::Exact("10".into()));

    let o = Command::new(env!("CARGO_BIN_EXE_circulant"))
        .args(["verify", "--n", "7", "--r", "3"])
        .env("CIRCULANT_OUTPUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(dir.path().join("verify-report.json").exists());
}
