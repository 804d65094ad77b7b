use std::process::{Command, Output};

use num_complex::Complex64;
use serde_json::Value;

use polybergman::cli::fmt_float;
use polybergman::discpoly::{eval_disc_poly, DiscPolyIndex};

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_polybergman"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let o = bin(args);
    (o.status.code().unwrap(), serde_json::from_slice(&o.stdout).unwrap())
}

/// Data rows of a CSV table as header-keyed maps.
fn csv_rows(text: &str) -> Vec<std::collections::HashMap<String, String>> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut reader = csv::Reader::from_reader(body.as_bytes());
    let header = reader.headers().unwrap().clone();
    reader
        .records()
        .map(|r| {
            let r = r.unwrap();
            header.iter().map(String::from).zip(r.iter().map(String::from)).collect()
        })
        .collect()
}

#[test]
fn eval_matches_golden_file() {
    let o = bin(&["eval", "--gamma", "2", "--m", "3", "--n", "2", "--z", "0.3,0.4"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), include_str!("golden/eval_gamma2_m3_n2.csv"));
}

#[test]
fn eval_matches_library_bytes() {
    let v = eval_disc_poly(2.0, DiscPolyIndex::new(3, 2), Complex64::new(0.3, 0.4)).unwrap();
    let o = bin(&["eval", "--gamma", "2", "--m", "3", "--n", "2", "--z", "0.3,0.4"]);
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows[0]["value_re"], fmt_float(v.re));
    assert_eq!(rows[0]["value_im"], fmt_float(v.im));
}

#[test]
fn eval_trivial_values() {
    let (code, v) = json(&["eval", "--gamma", "0", "--m", "1", "--n", "1", "--z", "0,0", "--format", "json"]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"][0]["value_re"], -1.0);
    let (_, v) = json(&["eval", "--gamma", "0", "--m", "1", "--n", "0", "--z", "0.5,0", "--format", "json"]);
    assert_eq!(v["rows"][0]["value_re"], 0.5);
    assert_eq!(v["rows"][0]["value_im"], 0.0);
}

#[test]
fn eval_outside_disc_is_exit_2() {
    let o = bin(&["eval", "--gamma", "0", "--m", "1", "--n", "1", "--z", "1.5,0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).starts_with("error:"));
    assert!(o.stdout.is_empty());
}

#[test]
fn transform_examples() {
    let base = ["transform", "--format", "json", "--gamma", "0"];
    let run = |extra: &[&str]| {
        let args: Vec<&str> = base.iter().chain(extra).copied().collect();
        json(&args)
    };

    let (code, v) = run(&["--alpha", "0", "--m", "0", "--n", "0", "--z", "2,0"]);
    let row = &v["rows"][0];
    assert_eq!(code, 0);
    assert_eq!(row["closed_re"], 0.5);
    assert_eq!(row["verdict"], "PASS");

    let (code, v) = run(&["--alpha", "0", "--m", "1", "--n", "1", "--z", "2,0"]);
    let row = &v["rows"][0];
    assert_eq!(code, 0);
    assert_eq!(row["closed_re"], 0.0);
    assert!(row["abs_err"].as_f64().unwrap() <= 1e-11);
    assert!(row["rel_err"].is_null());
    assert_eq!(row["verdict"], "PASS");

    let (code, v) = run(&["--alpha", "1", "--m", "1", "--n", "2", "--z", "1.5,0"]);
    let row = &v["rows"][0];
    assert_eq!(code, 0);
    let closed = row["closed_re"].as_f64().unwrap();
    assert!((closed + 1.0 / 27.0).abs() <= 1e-15, "{closed}");
    assert!(row["rel_err"].as_f64().unwrap() <= 1e-9);
    assert_eq!(row["verdict"], "PASS");
}

#[test]
fn transform_inside_guard_band_is_exit_2() {
    let o = bin(&["transform", "--gamma", "0", "--alpha", "0", "--m", "0", "--n", "0", "--z", "1.0005,0"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn coarse_rule_fails_with_exit_1() {
    let o = bin(&["transform", "--gamma", "0", "--alpha", "0", "--m", "3", "--n", "6", "--z", "1.5,0", "--nodes", "1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).trim_end().ends_with("FAIL"));
}

#[test]
fn bad_flags_are_exit_2() {
    assert_eq!(bin(&["verify", "--suite", "nope"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--gamma", "0"]).status.code(), Some(2));
    assert_eq!(bin(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(bin(&["eval", "--gamma", "0", "--m", "1", "--n", "1", "--z", "0.1,0.2,0.3"]).status.code(), Some(2));
}

#[test]
fn help_is_exit_0() {
    let o = bin(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("verify"));
}

#[test]
fn verify_lemma_and_bound_suites() {
    let o = bin(&["verify", "--suite", "lemma"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert!(!rows.is_empty());
    for r in &rows {
        let v = (r["value_re"].parse::<f64>().unwrap(), r["value_im"].parse::<f64>().unwrap());
        assert!(v.0.hypot(v.1) <= 1e-11, "{r:?}");
    }
    assert!(stderr(&o).contains(" 0 failed"));

    let o = bin(&["verify", "--suite", "bound", "--trials", "100", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = csv_rows(&stdout(&o));
    assert_eq!(rows.iter().filter(|r| r["verdict"] == "PASS").count(), rows.len());
    assert!(rows.len() >= 100);
}

#[test]
fn verify_propaction_has_no_failures() {
    let o = bin(&["verify", "--suite", "propaction", "--max-mn", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains(" 0 failed"));
}

#[test]
fn range_examples() {
    let o = bin(&["range", "--gamma", "0", "--alpha", "2", "--n-max", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), include_str!("golden/range_gamma0_alpha2.csv"));
    let rows = csv_rows(&stdout(&o));
    let derived: Vec<&str> = rows.iter().map(|r| r["derived_dimension"].as_str()).collect();
    assert_eq!(derived, ["1", "2", "3", "3", "3", "3", "3"]);
    for (n, r) in rows.iter().enumerate() {
        assert_eq!(r["oracle_dimension"], r["derived_dimension"]);
        assert_eq!(r["printed_dimension"] != r["oracle_dimension"], n >= 3);
    }

    let (code, v) = json(&["range", "--gamma", "0", "--alpha", "0", "--n-max", "6", "--format", "json"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 7);
    assert!(rows.iter().all(|r| r["derived_dimension"] == 1));

    let (_, v) = json(&["range", "--gamma", "0.3", "--alpha", "1.0", "--n-max", "4", "--format", "json"]);
    let dims: Vec<i64> = v["rows"].as_array().unwrap().iter().map(|r| r["derived_dimension"].as_i64().unwrap()).collect();
    assert_eq!(dims, [1, 2, 3, 4, 5]);
}

#[test]
fn range_unbounded_is_exit_2() {
    let o = bin(&["range", "--gamma", "2", "--alpha", "0"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("alpha > (gamma - 1)/2"));
}

#[test]
fn range_warns_near_integer_shift() {
    let o = bin(&["range", "--gamma", "0", "--alpha", "1.0000001", "--n-max", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stderr(&o).contains("warning"));
}

#[test]
fn bound_examples() {
    let (code, v) = json(&["bound", "--gamma", "0", "--alpha", "0", "--a", "-4", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["V"], 1.0);
    assert!((v["W"].as_f64().unwrap() - 49.0 / 60.0).abs() <= 1e-12);
    let expected = 2.0 / std::f64::consts::PI * 49.0 / 60.0;
    assert!((v["bound_constant"].as_f64().unwrap() - expected).abs() <= 1e-12);

    let (code, v) = json(&["bound", "--gamma", "1", "--alpha", "0", "--a", "-4", "--b", "2"]);
    assert_eq!(code, 0);
    assert_eq!(v["V"], "divergent");

    let (code, v) = json(&["bound", "--gamma", "0", "--alpha", "0", "--a", "0", "--b", "0"]);
    assert_eq!(code, 0);
    assert_eq!(v["W"], "divergent");
    assert_eq!(v["W_divergent_at"], "t=1");
}

#[test]
fn repeated_runs_are_identical() {
    let args = ["verify", "--suite", "orthogonality"];
    assert_eq!(bin(&args).stdout, bin(&args).stdout);
}
