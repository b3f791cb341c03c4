use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use infoscale::read_table;
use tempfile::TempDir;

fn infoscale(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_infoscale"))
        .args(args)
        .env("INFOSCALE_LOG", "warn")
        .output()
        .expect("running the CLI")
}

fn write(dir: &Path, name: &str, body: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn record(out: &Output) -> Vec<(String, f64)> {
    String::from_utf8(out.stdout.clone())
        .unwrap()
        .lines()
        .skip(1)
        .map(|l| {
            let (k, v) = l.split_once(',').unwrap();
            (k.to_string(), v.parse().unwrap())
        })
        .collect()
}

fn field(rec: &[(String, f64)], name: &str) -> f64 {
    rec.iter()
        .find(|(k, _)| k == name)
        .unwrap_or_else(|| panic!("no field {name}"))
        .1
}

#[test]
fn divergence_report_matches_hand_values() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"weights": [0.25, 0.75]}"#);
    let q = write(dir.path(), "q.json", r#"{"weights": [0.5, 0.5]}"#);
    let f = write(dir.path(), "f.json", r#"{"values": [0, 1]}"#);
    let out = infoscale(&[
        "divergence",
        "--p",
        path(&p),
        "--q",
        path(&q),
        "--observable",
        path(&f),
        "--n",
        "2",
    ]);
    assert!(out.status.success());
    let rec = record(&out);
    let kl = 0.5 * 2f64.ln() + 0.5 * (2.0f64 / 3.0).ln();
    assert!((field(&rec, "kl") - kl).abs() < 1e-11);
    assert!((field(&rec, "tv") - 0.25).abs() < 1e-12);
    assert!((field(&rec, "gap") + 0.25).abs() < 1e-12);
    assert!((field(&rec, "product_kl") - 2.0 * kl).abs() < 1e-11);
}

#[test]
fn goal_bound_json_output_sandwiches_gap() {
    let dir = TempDir::new().unwrap();
    let p = write(dir.path(), "p.json", r#"{"weights": [0.2, 0.3, 0.5]}"#);
    let q = write(dir.path(), "q.json", r#"{"weights": [0.4, 0.4, 0.2]}"#);
    let f = write(dir.path(), "f.json", r#"{"values": [-1, 0.5, 2]}"#);
    let out = infoscale(&[
        "goal-bound",
        "--p",
        path(&p),
        "--q",
        path(&q),
        "--observable",
        path(&f),
        "--format",
        "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let get = |k: &str| v[k].as_f64().unwrap();
    assert!(get("xi_minus") <= get("gap") && get("gap") <= get("xi_plus"));
}

#[test]
fn markov_and_gibbs_subcommands_run() {
    let dir = TempDir::new().unwrap();
    let pc = write(
        dir.path(),
        "p.json",
        r#"{"rows": [[0.9, 0.1], [0.2, 0.8]]}"#,
    );
    let qc = write(
        dir.path(),
        "q.json",
        r#"{"rows": [[0.7, 0.3], [0.4, 0.6]]}"#,
    );
    let g = write(dir.path(), "g.json", r#"{"values": [0, 1]}"#);
    let out = infoscale(&[
        "markov",
        "--p",
        path(&pc),
        "--q",
        path(&qc),
        "--observable",
        path(&g),
        "--cheap",
        "--enumerate",
        "8",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = record(&out);
    let gap = field(&rec, "stationary_gap");
    assert!(field(&rec, "xi_minus") <= gap && gap <= field(&rec, "xi_plus"));
    assert!(field(&rec, "rer") <= field(&rec, "sup_row_re"));

    let phi = write(
        dir.path(),
        "phi.json",
        r#"{"d": 1, "clusters": [{"type": "pair_product", "offsets": [[0], [1]], "coeff": -0.5},
                                 {"type": "field", "offsets": [[0]], "coeff": -0.1}]}"#,
    );
    let psi = write(
        dir.path(),
        "psi.json",
        r#"{"d": 1, "clusters": [{"type": "pair_product", "offsets": [[0], [1]], "coeff": -0.4}]}"#,
    );
    let out = infoscale(&[
        "gibbs",
        "--phi",
        path(&phi),
        "--psi",
        path(&psi),
        "--n",
        "3",
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let rec = record(&out);
    assert_eq!(field(&rec, "sites"), 7.0);
    assert!((field(&rec, "triple_norm_difference") - 0.2).abs() < 1e-15);
    let gap = field(&rec, "per_site_gap");
    assert!(field(&rec, "xi_minus") <= gap && gap <= field(&rec, "xi_plus"));
}

#[test]
fn empty_range_is_an_error() {
    let out = infoscale(&["figure", "3a", "--from", "1", "--to", "0.5"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("empty sweep range"));
}

#[test]
fn parse_errors_name_the_location() {
    let dir = TempDir::new().unwrap();
    let bad = write(dir.path(), "bad.json", "{\"weights\": [0.5,\n}");
    let q = write(dir.path(), "q.json", r#"{"weights": [0.5, 0.5]}"#);
    let out = infoscale(&["divergence", "--p", path(&bad), "--q", path(&q)]);
    assert!(!out.status.success());
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json") && err.contains("line 2"), "{err}");
}

#[test]
fn unknown_preset_is_an_error() {
    assert!(!infoscale(&["figure", "9z"]).status.success());
}

#[test]
fn preset_3a_truth_vanishes_and_is_bracketed() {
    let out = infoscale(&["figure", "--figure", "3a"]);
    assert!(out.status.success());
    let table = read_table(out.stdout.as_slice()).unwrap();
    assert_eq!(table.rows.len(), 191);
    for row in &table.rows {
        assert_eq!(row[2], 0.0);
        assert!(row[3] <= 0.0 && 0.0 <= row[4]);
    }
}

#[test]
fn failed_points_become_nan_rows() {
    let dir = TempDir::new().unwrap();
    let target = write(
        dir.path(),
        "t.json",
        r#"{"kind": "ising1d", "beta": 1, "J": 1}"#,
    );
    let baseline = write(
        dir.path(),
        "b.json",
        r#"{"kind": "meanfield", "beta": 1, "J": 1}"#,
    );
    let args = [
        "phase",
        "--target",
        path(&target),
        "--baseline",
        path(&baseline),
        "--sweep",
        "beta",
        "--from",
        "-0.1",
        "--to",
        "0.1",
        "--step",
        "0.1",
    ];
    let out = infoscale(&args);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[1].starts_with("-0.1,nan,"));
    assert!(lines[2].starts_with("0,nan,"));
    assert!(!lines[3].contains("nan"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("failed"));

    let mut strict = vec!["--strict"];
    strict.extend(args);
    assert_eq!(infoscale(&strict).status.code(), Some(2));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("5a.csv");
    let to_file = infoscale(&["figure", "5a", "--out", path(&file)]);
    assert!(to_file.status.success() && to_file.stdout.is_empty());
    assert_eq!(
        fs::read(&file).unwrap(),
        infoscale(&["figure", "5a"]).stdout
    );
}

#[test]
fn grid_overrides_apply_to_presets() {
    let out = infoscale(&[
        "figure", "5b", "--from", "0", "--to", "0.5", "--step", "0.25",
    ]);
    let table = read_table(out.stdout.as_slice()).unwrap();
    let params: Vec<f64> = table.rows.iter().map(|r| r[0]).collect();
    assert_eq!(params, vec![0.0, 0.25, 0.5]);
}
