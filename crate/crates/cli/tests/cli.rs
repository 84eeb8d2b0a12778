use std::process::{Command, Output};

use eurelax_core::exact::parse_rational;
use eurelax_core::{bound_report, BoundReport, VectorKind, YPolicy};

fn eurelax(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_eurelax"))
        .args(args)
        .env_remove("EURELAX_PREC")
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = eurelax(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn records(csv_text: &str) -> (csv::StringRecord, Vec<csv::StringRecord>) {
    let mut r = csv::Reader::from_reader(csv_text.as_bytes());
    let header = r.headers().unwrap().clone();
    let rows = r.records().map(|x| x.unwrap()).collect();
    (header, rows)
}

#[test]
fn counts_three_reads_three() {
    let (header, rows) = records(&stdout(&["counts", "--n", "3"]));
    assert_eq!(header.iter().collect::<Vec<_>>(), ["X", "brute", "complement", "deletion", "closed"]);
    let row = rows.iter().find(|r| &r[0] == "{3}").expect("X = {3} row");
    assert_eq!(row.iter().skip(1).collect::<Vec<_>>(), ["3", "3", "3", "3"]);
}

#[test]
fn bounds_csv_satisfies_soundness_chain() {
    let text = stdout(&["bounds", "--n-min", "4", "--n-max", "12", "--kind", "both", "--y", "paper", "--format", "csv"]);
    let (header, rows) = records(&text);
    assert_eq!(header.len(), BoundReport::CSV_HEADER.len());
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    // 9 Old rows plus New for n = 4, 6, 8, 10, 12
    assert_eq!(rows.len(), 14);
    for r in &rows {
        let q = |name: &str| parse_rational(&r[col(name)]).unwrap();
        assert!(q("lin_bound_lo") <= q("xmin_hi"), "row {r:?}");
        assert!(q("xmin_lo") <= q("q_right_hi"), "row {r:?}");
        assert!(q("q_right_hi") < parse_rational("0").unwrap(), "row {r:?}");
    }
}

#[test]
fn bounds_json_round_trips() {
    let text = stdout(&["--prec", "64", "bounds", "--n-min", "6", "--n-max", "6", "--format", "json"]);
    let parsed: Vec<BoundReport> = serde_json::from_str(&text).unwrap();
    let old = bound_report(6, VectorKind::Old, &YPolicy::Paper, 64).unwrap();
    let new = bound_report(6, VectorKind::New, &YPolicy::Paper, 64).unwrap();
    assert_eq!(parsed, vec![old, new]);
}

#[test]
fn given_y_is_reported_exactly() {
    let text = stdout(&["bounds", "--n-min", "5", "--n-max", "5", "--kind", "old", "--y", "1/2"]);
    let (header, rows) = records(&text);
    let col = |name: &str| header.iter().position(|h| h == name).unwrap();
    assert_eq!(&rows[0][col("y_lo")], "1/2");
    assert_eq!(&rows[0][col("y_hi")], "1/2");
    assert!(rows[0][col("D")].contains('/'));
}

#[test]
fn output_is_deterministic() {
    for args in [
        &["bounds", "--n-min", "2", "--n-max", "9"][..],
        &["eigvec", "--n-max", "6", "--format", "json"][..],
        &["eigvec", "--n-max", "6", "--format", "svg"][..],
    ] {
        assert_eq!(stdout(args), stdout(args), "{args:?}");
    }
}

#[test]
fn eigvec_tail_entries_in_unit_interval() {
    let (_, rows) = records(&stdout(&["eigvec", "--n-max", "10", "--format", "csv"]));
    assert_eq!(rows.len(), (1..=10).map(|n| n + 1).sum::<usize>());
    let last: Vec<f64> = rows
        .iter()
        .filter(|r| &r[0] == "10")
        .map(|r| r[3].parse().unwrap())
        .collect();
    assert_eq!(*last.last().unwrap(), 1.0);
    assert!(last[6..].iter().all(|v| (0.0..=1.0).contains(v)));
    assert!(last[0] < 0.0);
}

#[test]
fn svg_outputs() {
    let scatter = stdout(&["eigvec", "--n-max", "4", "--format", "svg"]);
    assert!(scatter.starts_with("<?xml") && scatter.trim_end().ends_with("</svg>"));
    assert!(scatter.contains(r#"version="1.1""#));
    // 2 + 3 + 4 + 5 points and 4 legend markers
    assert_eq!(scatter.matches("<circle").count(), 14 + 4);
    let line = stdout(&["diff", "--kind", "new", "--n-min", "3", "--n-max", "6", "--format", "svg"]);
    assert!(line.contains("<path d=\"M"));
}

#[test]
fn new_differences_grow() {
    let (_, rows) = records(&stdout(&["diff", "--kind", "new", "--n-min", "3", "--n-max", "7"]));
    let diffs: Vec<f64> = rows.iter().map(|r| r[4].parse().unwrap()).collect();
    assert!(diffs.windows(2).all(|w| w[1] > w[0]), "{diffs:?}");
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("counts.json");
    let out = eurelax(&["counts", "--n", "2", "--format", "json", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v[1]["X"], "{2}");
}

fn error_json(args: &[&str]) -> serde_json::Value {
    let out = eurelax(args);
    assert!(!out.status.success(), "{args:?} should fail");
    assert!(out.stdout.is_empty());
    serde_json::from_slice(&out.stderr).expect("stderr is JSON")
}

#[test]
fn errors_are_json() {
    assert_eq!(error_json(&["counts", "--n", "12"])["error"]["kind"], "precondition");
    assert_eq!(error_json(&["--prec", "8", "roots", "--n-max", "3"])["error"]["kind"], "domain");
    assert_eq!(error_json(&["bogus"])["error"]["kind"], "usage");
    assert_eq!(error_json(&["bounds", "--n-min", "5", "--n-max", "3"])["error"]["kind"], "precondition");
    assert_eq!(error_json(&["counts", "--n", "3", "--format", "svg"])["error"]["kind"], "usage");
    assert_eq!(error_json(&["bounds", "--n-max", "4", "--y", "x"])["error"]["kind"], "usage");
}

#[test]
fn precision_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_eurelax"))
        .args(["roots", "--n-max", "2"])
        .env("EURELAX_PREC", "4")
        .output()
        .unwrap();
    assert!(!out.status.success());
}

#[test]
fn help_exits_cleanly() {
    let out = eurelax(&["--help"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stdout).contains("bounds"));
}
