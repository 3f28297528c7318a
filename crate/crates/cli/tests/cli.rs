use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qorbit")).args(args).output().expect("binary runs")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

#[test]
fn fold_reports_non_reduced_type() {
    let o = run(&["fold", "--type", "A4", "--tau", "4,3,2,1"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["folded_type"], "BC2");
    assert_eq!(v["non_reduced"], true);
}

#[test]
fn w_minus_rank_one() {
    let o = run(&["twist", "wminus", "--type", "A1", "--eps", "-1"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["w_minus"], serde_json::json!(["e", "s1"]));
}

#[test]
fn theosec_suite_small_rank() {
    let o = run(&["check", "theosec", "--max-rank", "3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["passed"], true);
}

#[test]
fn inline_json_matches_flags() {
    let a = run(&["fold", "--type", "D4", "--tau", "1,2,4,3", "--detail"]);
    let b = run(&["fold", "--detail", "--json", r#"{"type": "D4", "tau": [1, 2, 4, 3]}"#]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn unknown_keys_are_rejected() {
    let o = run(&["fold", "--json", r#"{"type": "A3", "colour": "red"}"#]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["error"]["kind"], "validation");
}

#[test]
fn validation_errors_exit_two() {
    let o = run(&["fold", "--type", "Q7"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["twist", "classify", "--type", "A2", "--eps", "1,x"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn guard_errors_exit_three() {
    let o = run(&["verma", "--case", "A1", "--lambda", "q^{-1}", "--t-max", "100000"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(json(&o)["error"]["kind"], "guard");
}

#[test]
fn output_is_deterministic_and_written_to_file() {
    let dir = std::env::temp_dir().join(format!("qorbit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("out.json");
    let p = path.to_str().unwrap();
    let args = ["hc", "--type", "B2", "--eps", "-1,1", "--hw", "1,0", "--out", p];
    assert_eq!(run(&args).status.code(), Some(0));
    let first = std::fs::read(&path).unwrap();
    assert_eq!(run(&args).status.code(), Some(0));
    assert_eq!(first, std::fs::read(&path).unwrap());
    let v: Value = serde_json::from_slice(&first).unwrap();
    assert!(!v["terms"].as_array().unwrap().is_empty());
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn stratify_and_state() {
    let o = run(&["h2", "stratify", "--d", "4", "--t", "5"]);
    let v = json(&o);
    assert_eq!(v["stratum"], "S_plus");
    assert_eq!(v["n"], 0);
    let o = run(&["h2", "state", "--stratum", "plus", "--n", "2", "--word", "z", "--residuals"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let x: f64 = v["max_residual"].as_str().unwrap().parse().unwrap();
    assert!(x < 1e-10);
}

#[test]
fn verma_classification() {
    let o = run(&["verma", "--case", "A1xA1", "--classify", "--n-max", "3"]);
    let v = json(&o);
    assert_eq!(v["family"]["kind"], "discrete");
    assert_eq!(v["family"]["members"].as_array().unwrap().len(), 4);
    let o = run(&["verma", "--case", "A1xA1", "--lambda", "3/4"]);
    assert_eq!(json(&o)["unitarizable"], false);
}

#[test]
fn integral_exact_value() {
    let o = run(&["integral", "--type", "A1", "--eps", "1", "--lambda", "q^{-1}", "--hw", "1", "--q", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["value"], "41/15");
}

#[test]
fn cell_state_weights_sum_to_one() {
    let o = run(&["state", "--case", "A1", "--eps", "-1", "--gamma", "1/3"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let cells = v["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 2);
    let total: f64 = cells.iter().map(|c| c["weight"].as_str().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
}
