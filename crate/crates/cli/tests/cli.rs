use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_subsmooth"));
    c.env_remove("SUBSMOOTH_SEED");
    c
}

fn run_in(dir: &Path, args: &[&str]) -> (i32, Value, String) {
    let out: Output = bin().current_dir(dir).args(args).output().unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap(), json, stderr)
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args)
}

fn as_f64(v: &Value) -> f64 {
    match v {
        Value::String(s) if s == "+inf" => f64::INFINITY,
        Value::String(s) if s == "-inf" => f64::NEG_INFINITY,
        other => other.as_f64().unwrap(),
    }
}

fn result(report: &Value) -> &Value {
    &report["results"][0]
}

fn status<'a>(report: &'a Value, verdict: &str) -> &'a str {
    result(report)["verdicts"][verdict]["status"].as_str().unwrap()
}

#[test]
fn subderiv_examples() {
    let (code, r, _) = run(&["subderiv", "--fn", "neg_abs", "--x", "0", "--u", "1", "--kind", "0"]);
    assert_eq!(code, 0);
    assert!((as_f64(&result(&r)["outputs"]["value"]) - 1.0).abs() < 1e-6);

    let (code, r, _) = run(&["subderiv", "--fn", "sqrt_abs", "--x", "0", "--u", "1", "--kind", "r"]);
    assert_eq!(code, 0);
    let out = &result(&r)["outputs"];
    assert_eq!(as_f64(&out["value"]), f64::INFINITY);
    assert_eq!(out["estimate"]["divergent"], "ToPosInf");

    let (code, r, _) = run(&["subderiv", "--fn", "abs(x1)", "--x", "0.5", "--u", "1", "--kind", "r"]);
    assert_eq!(code, 0);
    let out = &result(&r)["outputs"];
    assert!((as_f64(&out["value"]) - 1.0).abs() < 1e-6);
    assert_eq!(out["lattice"]["below"], serde_json::json!(["d"]));
    assert_eq!(out["lattice"]["above"], serde_json::json!(["r+"]));
}

#[test]
fn usage_and_data_errors() {
    let (code, _, err) = run(&["subderiv", "--fn", "abs(x1", "--x", "0", "--u", "1"]);
    assert_eq!(code, 64);
    assert!(err.contains("column 7"), "{err}");
    assert_eq!(run(&["subderiv", "--fn", "abs", "--x", "0", "--u", "1", "--kind", "zz"]).0, 64);
    assert_eq!(run(&["subderiv", "--fn", "x2", "--x", "0", "--u", "1"]).0, 64);
    assert_eq!(run(&["subderiv", "--fn", "abs", "--x", "0,1", "--u", "1"]).0, 64);
    assert_eq!(run(&["frobnicate"]).0, 64);
    assert_eq!(run(&["--help"]).0, 0);

    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("bad.csv"), "x1,g1\n0,oops\n").unwrap();
    let args = ["classify", "--fn", "abs", "--x", "0", "--u", "1", "--oracle", "bad.csv"];
    assert_eq!(run_in(dir.path(), &args).0, 65);
    let args = ["classify", "--fn", "abs", "--x", "0", "--u", "1", "--oracle", "missing.csv"];
    assert_eq!(run_in(dir.path(), &args).0, 66);
    std::fs::write(dir.path().join("c.conf"), "grid.rho = 2\n").unwrap();
    assert_eq!(run_in(dir.path(), &["--config", "c.conf", "subderiv", "--fn", "abs", "--x", "0", "--u", "1"]).0, 64);
}

#[test]
fn classify_examples() {
    let (code, r, _) = run(&["classify", "--fn", "neg_abs", "--x", "0", "--u", "1"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "upper_semismooth"), "holds");
    assert_eq!(status(&r, "strictly_upper_semismooth"), "fails");
    assert_eq!(run(&["classify", "--fn", "neg_abs", "--x", "0", "--u", "1", "--strict"]).0, 1);

    let (code, r, _) = run(&["classify", "--fn", "abs", "--x", "0", "--u", "1", "--strict"]);
    assert_eq!(code, 0);
    assert_eq!(status(&r, "strictly_upper_semismooth"), "holds");

    let (code, r, _) = run(&["classify", "--fn", "osc", "--x", "0", "--u", "1"]);
    assert_eq!(code, 1);
    assert_eq!(status(&r, "upper_semismooth"), "fails");
}

#[test]
fn classify_with_tabulated_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let mut csv = String::from("x1,g1\n0,-1\n0,1\n");
    for i in 1..=40 {
        csv += &format!("{},1\n{},-1\n", i as f64 / 100.0, -i as f64 / 100.0);
    }
    std::fs::write(dir.path().join("abs.csv"), csv).unwrap();
    let (code, r, _) = run_in(dir.path(), &["classify", "--fn", "abs(x1)", "--x", "0", "--u", "1", "--oracle", "abs.csv"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(result(&r)["inputs"]["oracle"]["csv"], "abs.csv");
    assert_eq!(status(&r, "upper_semismooth"), "holds");
}

#[test]
fn verify_paper_runs() {
    let (code, r, _) = run(&["verify-paper"]);
    assert_eq!(code, 0);
    let results = r["results"].as_array().unwrap();
    assert!(results.len() > 50);
    let keys: Vec<&str> = results.iter().map(|x| x["key"].as_str().unwrap()).collect();
    let mut sorted = keys.clone();
    sorted.sort();
    assert_eq!(keys, sorted);
    assert_eq!(r["timing"].as_array().unwrap().len(), results.len());

    let (code, r, _) = run(&["verify-paper", "--tol", "1e-12"]);
    assert_eq!(code, 2);
    assert_eq!(r["status"], "inconclusive");

    let (code, r, _) = run(&["verify-paper", "--only", "meanvalue"]);
    assert_eq!(code, 0);
    assert!(r["results"].as_array().unwrap().iter().all(|x| x["inputs"]["group"] == "meanvalue"));
    assert_eq!(run(&["verify-paper", "--only", "nothing"]).0, 64);
}

#[test]
fn determine_examples() {
    let dir = tempfile::tempdir().unwrap();
    let (code, r, _) = run_in(dir.path(), &["determine", "--f", "abs(x1)+3", "--g", "abs(x1)", "--grid", "-1:1:0.1"]);
    assert_eq!(code, 0);
    assert!((as_f64(&result(&r)["outputs"]["const_estimate"]) - 3.0).abs() < 1e-9);
    assert_eq!(status(&r, "theorem"), "holds");
    let csv = std::fs::read_to_string(dir.path().join("r_of_t.csv")).unwrap();
    assert!(csv.starts_with("segment,t,x,r\n"));
    assert!(csv.lines().count() > 60);

    let (code, r, _) = run_in(dir.path(), &["determine", "--f", "relu", "--g", "abs", "--grid", "-1:1:0.1", "--csv", "relu.csv"]);
    assert_eq!(code, 1);
    for p in result(&r)["outputs"]["inclusion_by_point"].as_array().unwrap() {
        let x = as_f64(&p["x"][0]);
        let want = if x < 0.0 { "fails" } else { "holds" };
        assert_eq!(p["inclusion"]["status"], want, "{x}");
    }

    let mut data = String::from("x1,g1\n0,-1\n0,1\n");
    for i in 1..=40 {
        data += &format!("{},1\n", i as f64 / 40.0);
    }
    std::fs::write(dir.path().join("data.csv"), data).unwrap();
    let (code, r, _) = run_in(dir.path(), &["determine", "--g-oracle", "data.csv", "--f", "abs(x1)", "--grid", "0:1:0.1"]);
    assert_eq!(code, 0, "{r}");
    assert_eq!(result(&r)["inputs"]["g"]["oracle"], "user_supplied");
    assert!(as_f64(&result(&r)["outputs"]["const_deviation"]) < 1e-6);
}

#[test]
fn reports_replay_from_their_config_echo() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["subderiv", "--fn", "max(x1, x2)", "--x", "0,0", "--u", "1,-1", "--kind", "up"];
    let mut first: Vec<&str> = vec!["--seed", "7", "--tol", "1e-7", "--report", "a.json"];
    first.extend(args);
    assert_eq!(run_in(dir.path(), &first).0, 0);
    let mut again: Vec<&str> = vec!["--config", "a.json", "--report", "b.json"];
    again.extend(args);
    assert_eq!(run_in(dir.path(), &again).0, 0);
    let read = |n: &str| -> Value { serde_json::from_str(&std::fs::read_to_string(dir.path().join(n)).unwrap()).unwrap() };
    let (a, b) = (read("a.json"), read("b.json"));
    assert_eq!(a["config_echo"], b["config_echo"]);
    assert_eq!(a["results"], b["results"]);
    assert_eq!(a["config_echo"]["settings"]["grid.seed"], 7);
}

#[test]
fn seed_variable_and_config_file() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("c.conf"), "grid.seed = 3\ngrid.tol = 1e-7\n").unwrap();
    let args = ["--config", "c.conf", "subderiv", "--fn", "abs", "--x", "0", "--u", "1"];
    let (_, r, _) = run_in(dir.path(), &args);
    assert_eq!(r["config_echo"]["settings"]["grid.seed"], 3);
    assert!((as_f64(&r["config_echo"]["settings"]["grid.tol"]) - 1e-7).abs() < 1e-22);
    let out = bin().current_dir(dir.path()).env("SUBSMOOTH_SEED", "11").args(args).output().unwrap();
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["config_echo"]["settings"]["grid.seed"], 11);
}
