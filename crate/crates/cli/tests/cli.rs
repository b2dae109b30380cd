use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn besov(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_besov")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn file(text: &str) -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(text.as_bytes()).unwrap();
    f
}

const PAIR: &str = r#"{"n": 2, "dim": 2,
  "matrices": [
    [[[1, 0], [1, 0]], [[0, 0], [2, 0]]],
    [[[0.5, 0], [2, 0]], [[0, 0], [2.5, 0]]]
  ]}"#;

#[test]
fn norm_of_a_resolvent() {
    let out = besov(&["norm", "--fn", "res([1],1+0i,1)", "--n", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert!((v["summary"]["b0"].as_f64().unwrap() - 1.0).abs() < 1e-3);
    assert!((v["summary"]["total"].as_f64().unwrap() - 2.0).abs() < 2e-3);
    assert!(v["summary"]["total_err_est"].is_number());
    assert_eq!(v["tool"], "besov");
    assert_eq!(v["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(v["quad"]["domain"], "mapped");
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows.iter().all(|r| r["err_est"].is_number()));
}

#[test]
fn single_seminorm() {
    let out = besov(&["norm", "--fn", "res([1,0],1,1)*res([0,1],2,1)", "--n", "2", "--omega", "1,2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let r = &v["rows"][0];
    assert_eq!(r["omega"], serde_json::json!([1, 2]));
    assert!((r["value"].as_f64().unwrap() - 0.5).abs() < 1e-3);
}

#[test]
fn decompose_constant_plus_resolvent() {
    let out = besov(&["decompose", "--fn", "1 + res([1,0],1+0i,1)", "--n", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["omega"], serde_json::json!([]));
    assert_eq!(rows[1]["omega"], serde_json::json!([1]));
    assert!(v["summary"]["reconstruction_max_error"].as_f64().unwrap() <= 1e-9);
}

#[test]
fn verify_homomorphism_on_a_pair() {
    let f = file(PAIR);
    let out = besov(&["verify", "--suite", "homomorphism", "--matrices", f.path().to_str().unwrap(), "--fns", "default"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pass"], true);
    assert_eq!(v["rows"].as_array().unwrap().len(), 6);
    assert!(v["rows"][0]["value"].as_f64().unwrap() <= 1e-3);
}

#[test]
fn calc_matches_the_inverse() {
    let f = file(PAIR);
    let out = besov(&["calc", "--fn", "res([0,1],1,1)", "--matrices", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // (B + 1)^{-1} with B = [[0.5, 2], [0, 2.5]]
    let m = &v["summary"]["matrices"][0];
    let expect = [[1.0 / 1.5, -2.0 / (1.5 * 3.5)], [0.0, 1.0 / 3.5]];
    for i in 0..2 {
        for j in 0..2 {
            assert!((m[i][j][0].as_f64().unwrap() - expect[i][j]).abs() < 1e-6, "{m}");
            assert!(m[i][j][1].as_f64().unwrap().abs() < 1e-6);
        }
    }
    assert!(v["summary"]["oracle_gap"].as_f64().unwrap() < 1e-6);
    assert!(v["summary"]["err_est"].is_number());
}

#[test]
fn input_errors_exit_2() {
    let nc = file(r#"{"n": 2, "dim": 2, "matrices": [[[[0,0],[1,0]],[[0,0],[0,0]]], [[[0,0],[0,0]],[[1,0],[0,0]]]]}"#);
    let out = besov(&["calc", "--fn", "exp([1,1])", "--matrices", nc.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("do not commute"));

    let left = file(r#"{"n": 1, "dim": 1, "matrices": [[[[-1,0]]]]}"#);
    let out = besov(&["calc", "--fn", "exp([1])", "--matrices", left.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));

    let broken = file("{\"n\": 1,\n \"dim\": }");
    let out = besov(&["calc", "--fn", "exp([1])", "--matrices", broken.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));

    let out = besov(&["calc", "--fn", "exp([1])", "--matrices", "/nonexistent/tuple.json"]);
    assert_eq!(out.status.code(), Some(2));

    let f = file(PAIR);
    let out = besov(&["calc", "--fn", "exp([1])", "--matrices", f.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2), "one-variable function on a pair");

    let out = besov(&["norm", "--fn", "res([1],1,1)", "--n", "1", "--format", "xml"]);
    assert_eq!(out.status.code(), Some(2));
    let out = besov(&["norm", "--fn", "res([1],-1,1)", "--n", "1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn failed_check_exits_1() {
    // the last smoothed gap sits above 2e-3 for this scalar case
    let a = file(r#"{"n": 1, "dim": 1, "matrices": [[[[2,0]]]]}"#);
    let out = besov(&["verify", "--suite", "qt", "--matrices", a.path().to_str().unwrap(), "--fns", "res([1],1,1)"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["pass"], false);
    let rows = v["rows"].as_array().unwrap();
    assert!(rows[..3].iter().all(|r| r["pass"] == true));
    assert_eq!(rows[3]["pass"], false);
}

#[test]
fn csv_reports() {
    let out = besov(&["norm", "--fn", "res([1],2,1)", "--n", "1", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0));
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.starts_with("# command=norm\n"), "{s}");
    assert!(s.contains("# quad.rel_tol=1e-7\n"));
    assert!(s.contains("# version="));
    let table: Vec<&str> = s.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(table[0], "omega,value,err_est,converged,diverging,method");
    assert_eq!(table.len(), 3);
}

#[test]
fn gsf_of_a_scalar() {
    let a = file(r#"{"n": 1, "dim": 1, "matrices": [[[[1,0]]]]}"#);
    let out = besov(&["gsf", "--matrices", a.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    // sup_α π α / (1 + α) over α <= 1e3
    let g = v["rows"][0]["gamma_upper"].as_f64().unwrap();
    assert!((g - std::f64::consts::PI * 1e3 / 1001.0).abs() < 1e-3, "{g}");
}

#[test]
fn reproduce_reports_each_sample() {
    let out = besov(&["reproduce", "--fn", "res([1,0],1,1)*res([0,1],1,1)", "--n", "2", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["rows"].as_array().unwrap().len(), 3);
    let out = besov(&["reproduce", "--fn", "1 + res([1],1,1)", "--n", "1", "--samples", "3"]);
    assert_eq!(out.status.code(), Some(2), "needs a function vanishing at infinity");
}

#[test]
fn identical_invocations_give_identical_bytes() {
    let f = file(PAIR);
    let args = ["verify", "--suite", "spectral", "--matrices", f.path().to_str().unwrap(), "--fns", "exp([1,1]);2 + exp([0.5,0])*res([0,1],1+1i,1)", "--seed", "9"];
    let a = besov(&args);
    let b = besov(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["seed"], 9);
}
