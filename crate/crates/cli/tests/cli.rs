use std::collections::HashMap;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_anharmonic"));
    c.env_remove("ANHARMONIC_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Rows of a CSV document as column -> value maps, skipping `#` lines.
fn rows(csv_text: &str) -> Vec<HashMap<String, String>> {
    let body: String = csv_text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let headers = r.headers().unwrap().clone();
    r.records()
        .map(|rec| headers.iter().zip(rec.unwrap().iter()).map(|(h, v)| (h.to_string(), v.to_string())).collect())
        .collect()
}

fn ok_rows(args: &[&str]) -> Vec<HashMap<String, String>> {
    let o = run(args);
    assert_eq!(o.status.code(), Some(0), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    rows(&stdout(&o))
}

#[test]
fn solve_double_well_even_sector() {
    let r = ok_rows(&["solve", "--quartic", "--a4", "1", "--a2", "-3", "--sector", "even", "--count", "2"]);
    let e: Vec<&str> = r.iter().map(|row| row["energy"].as_str()).collect();
    assert_eq!(e, ["-0.59349330", "3.34533567"]);
    assert!(r.iter().all(|row| row["sector"] == "even" && row["converged"] == "true"));
}

#[test]
fn solve_qes_pair() {
    let r = ok_rows(&["solve", "--sextic", "--qes-s", "(2+sqrt3)/4", "--qes-j", "2", "--count", "2"]);
    let e: Vec<&str> = r.iter().map(|row| row["energy"].as_str()).collect();
    assert_eq!(e, ["-5.46410162", "5.46410162"]);
    assert!(r.iter().all(|row| row["qes_exact"] == "true"));
}

#[test]
fn solve_with_zero_count_prints_only_the_header() {
    let o = run(&["solve", "--quartic", "--a2", "-3", "--count", "0", "--no-meta"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn table1_cell_and_json_agree() {
    let csv_rows = ok_rows(&["table1"]);
    assert_eq!(csv_rows.len(), 44);
    let cell = csv_rows.iter().find(|r| r["a2"] == "-7" && r["level"] == "3").expect("cell present");
    assert_eq!(cell["energy"], "-2.11199938");
    assert!(csv_rows.iter().all(|r| r["status"] == "ok"));

    let o = run(&["table1", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let doc: Value = serde_json::from_slice(&o.stdout).unwrap();
    let json_rows = doc["rows"].as_array().unwrap();
    assert_eq!(json_rows.len(), csv_rows.len());
    for (c, j) in csv_rows.iter().zip(json_rows) {
        for col in ["energy", "energy_full", "reference"] {
            assert_eq!(j[col].as_f64().unwrap(), c[col].parse::<f64>().unwrap(), "{col}");
        }
    }
    assert!(doc["meta"].as_array().unwrap().iter().any(|m| m["key"] == "command" && m["value"] == "table1"));
}

#[test]
fn table2_cell() {
    let r = ok_rows(&["table2"]);
    assert_eq!(r.len(), 40);
    let cell = r.iter().find(|r| r["j"] == "3.5" && r["level"] == "1").expect("cell present");
    assert_eq!(cell["energy"], "-3.02264936");
}

#[test]
fn scan_grid_sizes() {
    let r = ok_rows(&["scan", "--quartic", "--a2", "0", "--sector", "even", "--e-min", "0", "--e-max", "12", "--step", "0.05"]);
    assert_eq!(r.len(), 241);
    assert_eq!(r[0]["energy"], "0.0000000000");
    assert_eq!(r[0]["converged"], "true");
    assert_eq!(r[240]["energy"], "12.0000000000");
    let r = ok_rows(&["scan", "--quartic", "--a2", "0", "--sector", "even", "--e-min", "1", "--e-max", "1"]);
    assert_eq!(r.len(), 1);
}

#[test]
fn scan_flags_unconverged_points() {
    let r = ok_rows(&[
        "scan", "--quartic", "--a2", "0", "--sector", "even", "--e-min", "0", "--e-max", "2", "--step", "0.5", "--h-terms",
        "5",
    ]);
    assert!(r.iter().any(|row| row["converged"] == "false"));
}

#[test]
fn scan_needs_a_window() {
    let o = run(&["scan", "--quartic", "--a2", "0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn compare_passes_and_fails() {
    let r = ok_rows(&["compare", "--quartic", "--a2", "-5", "--count", "4"]);
    assert_eq!(r.len(), 4);
    assert!(r.iter().all(|row| row["within_tolerance"] == "true"));
    let sectors: Vec<&str> = r.iter().map(|row| row["sector"].as_str()).collect();
    assert_eq!(sectors, ["even", "odd", "even", "odd"]);

    let o = run(&["compare", "--quartic", "--a2", "-5", "--count", "2", "--h-terms", "5"]);
    assert_ne!(o.status.code(), Some(0));
    assert_ne!(o.status.code(), Some(2));

    let o = run(&["compare", "--sextic", "--qes-s", "(2+sqrt3)/4", "--qes-j", "1", "--count", "2", "--tolerance", "1e-8"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
}

#[test]
fn invalid_arguments_exit_with_two() {
    for args in [
        vec!["solve", "--quartic", "--sextic"],
        vec!["solve", "--quartic", "--a2", "abc"],
        vec!["solve", "--quartic", "--a4", "-1"],
        vec!["solve", "--quartic", "--am2", "2", "--sector", "even"],
        vec!["bogus"],
        vec!["solve"],
    ] {
        let o = run(&args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
    }
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["solve", "--quartic", "--a2", "-3", "--count", "1", "--format", "json"])
        .env("ANHARMONIC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let doc: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("solve.json")).unwrap()).unwrap();
    assert_eq!(doc["rows"][0]["energy"].as_f64(), Some(-0.5934933));

    let explicit = dir.path().join("sub/out.csv");
    let o = bin()
        .args(["solve", "--quartic", "--a2", "-3", "--count", "1", "-o", explicit.to_str().unwrap()])
        .env("ANHARMONIC_OUT_DIR", dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(rows(&std::fs::read_to_string(explicit).unwrap())[0]["energy"], "-0.59349330");
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("job.toml");
    std::fs::write(&path, "quartic = true\na4 = 1\na2 = -3\nsector = \"even\"\ncount = 2\n").unwrap();
    let p = path.to_str().unwrap();
    let r = ok_rows(&["solve", "--config", p]);
    assert_eq!(r.len(), 2);
    assert_eq!(r[0]["energy"], "-0.59349330");
    let r = ok_rows(&["solve", "--config", p, "--count", "1", "--sector", "odd"]);
    assert_eq!(r.len(), 1);
    assert_eq!(r[0]["sector"], "odd");

    std::fs::write(&path, "quartic = true\nnot_a_flag = 3\n").unwrap();
    assert_eq!(run(&["solve", "--config", p]).status.code(), Some(2));
}

#[test]
fn output_is_deterministic() {
    let args = ["solve", "--quartic", "--a2", "-5", "--count", "3"];
    let a = run(&args);
    let b = run(&args);
    let mut seq_args = args.to_vec();
    seq_args.push("--sequential");
    let c = run(&seq_args);
    assert_eq!(a.stdout, b.stdout);
    let body = |o: &Output| stdout(o).lines().filter(|l| !l.starts_with('#')).collect::<Vec<_>>().join("\n");
    assert_eq!(body(&a), body(&c));
}
