use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_bernoulli-entropy");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn machine(args: &[&str]) -> Value {
    let mut all = args.to_vec();
    all.extend(["--format", "machine"]);
    let out = run(&all);
    assert!(out.status.success(), "{:?}: {}", args, String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn value(q: &Value) -> f64 {
    q["value"].as_str().expect("quantity").parse().expect("decimal string")
}

#[test]
fn poisson_entropy_examples() {
    let doc = machine(&["poisson-entropy", "--lambda", "1e6"]);
    assert!((value(&doc["results"]["entropy"]) - 8.327).abs() < 5e-4);
    assert_eq!(doc["results"]["entropy"]["unit"], "nats");

    let doc = machine(&["poisson-entropy", "--lambda", "1", "--method", "series"]);
    assert_eq!(doc["results"]["entropy"]["value"], "1.30484");
    assert_eq!(doc["results"]["entropy_method"], "series");

    let out = run(&["poisson-entropy", "--lambda", "0"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lambda"));
}

#[test]
fn bits_is_a_display_conversion() {
    let nats = machine(&["poisson-entropy", "--lambda", "3"]);
    let bits = machine(&["poisson-entropy", "--lambda", "3", "--bits"]);
    assert_eq!(bits["results"]["entropy"]["unit"], "bits");
    let ratio = value(&nats["results"]["entropy"]) / value(&bits["results"]["entropy"]);
    assert!((ratio - std::f64::consts::LN_2).abs() < 1e-5);
}

#[test]
fn entropy_bound_independent_proposition() {
    let doc = machine(&[
        "entropy-bound", "--independent", "--lambda", "1000000.01", "--sum-p2", "13333.47", "--m", "1e8",
        "--rule", "proposition",
    ]);
    assert_eq!(doc["results"]["theorem"], "proposition1");
    assert!((value(&doc["results"]["epsilon"]) - 0.205).abs() < 2e-3);
    assert!(doc["conditions"].as_array().unwrap().iter().all(|c| c["satisfied"] == true));
    assert!(doc["results"]["b_term"].get("log_value").is_some());
}

#[test]
fn entropy_bound_from_hypercube_coefficients() {
    let doc = machine(&["entropy-bound", "--coeffs", "0.475898,0.165797,0,4060,30"]);
    assert_eq!(doc["results"]["theorem"], "theorem4");
    assert!((value(&doc["results"]["relative_error_percent"]) - 0.16).abs() < 0.008);
}

#[test]
fn condition_violation_has_its_own_exit_code() {
    let out = run(&["entropy-bound", "--independent", "--lambda", "2", "--sum-p2", "1.8", "--m", "3"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("((1 - e^-lambda)/lambda) sum p^2 <= 1/4"), "{err}");

    let out = run(&[
        "entropy-bound", "--independent", "--lambda", "2", "--sum-p2", "1.8", "--m", "3", "--rule", "corollary",
    ]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        vec!["entropy-bound"],
        vec!["entropy-bound", "--independent", "--lambda", "2", "--sum-p2", "0.1"],
        vec!["entropy-bound", "--coeffs", "1,2,3"],
        vec!["entropy-bound", "--coeffs", "0.1,0,0,4,3", "--rule", "best"],
        vec!["entropy-bound", "--independent", "--lambda", "2", "--sum-p2", "0.1", "--m", "2.5"],
        vec!["exact", "--probs", "0.1,1.5"],
        vec!["hypercube", "--n", "4", "--k", "5"],
        vec!["poisson-entropy", "--lambda", "1", "--tol", "0"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn tv_bounds_sources() {
    let doc = machine(&["tv-bounds", "--independent", "--lambda", "0.5", "--sum-p2", "0.05"]);
    let r = &doc["results"];
    assert!(value(&r["bh_lower"]) <= value(&r["bh_upper"]));
    assert!(value(&r["bh_upper"]) <= value(&r["lecam_upper"]));

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("chain.json");
    std::fs::write(
        &path,
        r#"{"m": 3, "marginals": {"0": 0.1, "1": 0.2, "2": 0.1},
            "neighborhoods": {"0": [0, 1], "1": [0, 1, 2], "2": [1, 2]},
            "pair_expectations": [[0, 1, 0.03], [1, 0, 0.03], [1, 2, 0.02], [2, 1, 0.02]],
            "b3": "zero"}"#,
    )
    .unwrap();
    let doc = machine(&["tv-bounds", "--spec", path.to_str().unwrap()]);
    assert!(doc["results"].get("bh_upper").is_none());
    assert!(value(&doc["results"]["neighborhood_upper"]) > 0.0);
    let doc = machine(&["entropy-bound", "--spec", path.to_str().unwrap()]);
    assert_eq!(doc["results"]["theorem"], "theorem4");

    std::fs::write(&path, r#"{"m": 2, "marginals": [0.1], "neighborhoods": [[0]], "b3": "zero"}"#).unwrap();
    assert_eq!(run(&["tv-bounds", "--spec", path.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn exact_oracle() {
    let doc = machine(&["exact", "--probs", "0.1"]);
    // TV(Bernoulli(p), Po(p)) = p(1 - e^{-p})
    let expected = 0.1 * (1.0 - (-0.1f64).exp());
    assert!((value(&doc["results"]["tv_to_poisson"]) - expected).abs() < 1e-8);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("probs.txt");
    std::fs::write(&path, "0.1\n0.2\n0.05\n").unwrap();
    let doc = machine(&["exact", "--probs", path.to_str().unwrap()]);
    let pmf = doc["results"]["pmf"].as_array().unwrap();
    assert_eq!(pmf.len(), 4);
    let total: f64 = pmf.iter().map(value).sum();
    assert!((total - 1.0).abs() < 1e-5);
    assert!(value(&doc["results"]["entropy_gap"]) >= 0.0);
}

#[test]
fn hypercube_simulation() {
    let doc = machine(&["hypercube", "--n", "4", "--k", "4", "--simulate", "--replicates", "1000000", "--seed", "7"]);
    let sim = &doc["results"]["simulation"];
    assert!((value(&sim["mean"]) - 1.0).abs() < 4.0 * value(&sim["mean_std_error"]));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["hypercube", "--n", "6", "--k", "3", "--simulate", "--replicates", "20000", "--seed", "3", "--format", "machine"];
    let with = |t: &str| {
        let out = Command::new(BIN).args(args).env("BERNOULLI_ENTROPY_THREADS", t).output().unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(with("1"), with("3"));
    let out = Command::new(BIN).args(args).env("BERNOULLI_ENTROPY_THREADS", "zero").output().unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn reproduction_tables() {
    let doc = machine(&["table1"]);
    let rows = doc["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 10);
    assert_eq!(rows[0]["rel_error"], "0.16%");
    assert_eq!(rows[6]["rel_error"], "1.6e-19");

    let doc = machine(&["example1"]);
    let cases = doc["results"]["cases"].as_array().unwrap();
    assert_eq!(cases[0]["reproducible"], true);
    assert_eq!(cases[1]["reproducible"], false);
    assert!((value(&cases[1]["h_poisson"]) - 12.932).abs() < 1e-3);
}

#[test]
fn every_number_has_a_unit() {
    fn walk(v: &Value, path: &str) {
        match v {
            Value::Number(_) => panic!("bare number at {path}"),
            Value::Object(m) => m.iter().for_each(|(k, x)| walk(x, &format!("{path}.{k}"))),
            Value::Array(a) => a.iter().for_each(|x| walk(x, path)),
            _ => {}
        }
        if let Some(q) = v.get("value").filter(|q| q.is_string()) {
            assert!(v.get("unit").is_some(), "{path}: {q}");
        }
    }
    for args in [
        vec!["table1"],
        vec!["example1"],
        vec!["hypercube", "--n", "5", "--k", "2", "--simulate", "--replicates", "1000"],
        vec!["exact", "--probs", "0.3,0.1"],
    ] {
        walk(&machine(&args), "");
    }
}

#[test]
fn echoed_command_reproduces_results() {
    let dir = tempfile::tempdir().unwrap();
    let probs = dir.path().join("p.txt");
    std::fs::write(&probs, "0.01 0.02 0.03 0.2").unwrap();
    for args in [
        vec!["poisson-entropy", "--lambda", "17.5", "--tol", "1e-12"],
        vec!["entropy-bound", "--independent", "--lambda", "40", "--sum-p2", "0.8", "--m", "1000"],
        vec!["tv-bounds", "--coeffs", "0.01,0.002,0,5,20"],
        vec!["exact", "--probs", probs.to_str().unwrap()],
        vec!["hypercube", "--n", "5", "--k", "2", "--simulate", "--replicates", "5000", "--seed", "9"],
        vec!["table1", "--bits"],
    ] {
        let first = machine(&args);
        let echoed: Vec<String> = first["command"]
            .as_array()
            .unwrap()
            .iter()
            .map(|s| s.as_str().unwrap().to_string())
            .collect();
        let out = Command::new(BIN).args(&echoed).output().unwrap();
        let second: Value = serde_json::from_slice(&out.stdout).unwrap();
        assert_eq!(
            serde_json::to_string(&first["results"]).unwrap(),
            serde_json::to_string(&second["results"]).unwrap(),
            "{args:?}"
        );
        assert_eq!(first["inputs"], second["inputs"]);
    }
}

#[test]
fn csv_layout() {
    let out = run(&["poisson-entropy", "--lambda", "2", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("section,key,value,unit,log_value"));
    assert!(text.lines().any(|l| l.starts_with("results,entropy,") && l.ends_with(",nats,")));
}
