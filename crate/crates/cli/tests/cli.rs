use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn run(args: &[&str], env: &[(&str, &str)]) -> (i32, Value) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_quadreg"));
    cmd.args(args).env_remove("QUADREG_MAX_DIGITS");
    for (k, v) in env {
        cmd.env(k, v);
    }
    let out = cmd.output().expect("binary runs");
    let stdout = String::from_utf8(out.stdout).expect("utf-8 output");
    let json: Value = serde_json::from_str(&stdout).unwrap_or_else(|e| panic!("{args:?}: {e}\n{stdout}"));
    (out.status.code().expect("exit code"), json)
}

fn schema(name: &str) -> jsonschema::Validator {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "schemas", &format!("{name}.schema.json")].iter().collect();
    let text = std::fs::read_to_string(&path).expect("schema file");
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).expect("valid schema")
}

fn assert_schema(name: &str, v: &Value) {
    let validator = schema(name);
    let errors: Vec<String> = validator.iter_errors(v).map(|e| format!("{} at {}", e, e.instance_path)).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}\n{v:#}");
}

fn ok(args: &[&str]) -> Value {
    let (code, v) = run(args, &[]);
    assert_eq!(code, 0, "{args:?}: {v:#}");
    assert_schema(args[0], &v);
    v
}

fn fails(args: &[&str], env: &[(&str, &str)], want: i32) -> Value {
    let (code, v) = run(args, env);
    assert_eq!(code, want, "{args:?}: {v:#}");
    assert_schema("error", &v);
    v
}

#[test]
fn regulator_by_cycle() {
    let v = ok(&["regulator", "5", "--digits", "10", "--method", "cycle"]);
    assert_eq!(v["result"]["regulator"]["value"], "0.4812118251");
    let v = ok(&["regulator", "13", "--digits", "12"]);
    assert_eq!(v["result"]["regulator"]["value"], "1.194763217287");
}

#[test]
fn regulator_by_simulated_period_finding() {
    let v = ok(&["regulator", "13", "--digits", "10", "--method", "quantum", "--grid", "64", "--seed", "3"]);
    assert_eq!(v["result"]["regulator"]["value"], "1.1947632173");
    assert!(v["result"]["stats"]["successes"].as_u64().unwrap() > 0);
}

#[test]
fn invalid_inputs_exit_with_two() {
    let v = fails(&["regulator", "12"], &[], 2);
    assert!(v["error"]["message"].as_str().unwrap().contains("square-free"));
    fails(&["pell", "16"], &[], 2);
    fails(&["h", "3", "-1", "9"], &[], 2);
    fails(&["h", "3", "abc", "9"], &[], 2);
    fails(&["qdist", "5", "0"], &[], 2);
}

#[test]
fn exhausted_trials_exit_with_three() {
    let v = fails(&["regulator", "5", "--method", "quantum", "--grid", "16", "--trials", "0"], &[], 3);
    assert_eq!(v["error"]["detail"]["trials"], 0);
}

#[test]
fn size_cap_exits_with_four() {
    fails(&["pell", "94"], &[("QUADREG_MAX_DIGITS", "3")], 4);
    let (code, _) = run(&["pell", "94"], &[("QUADREG_MAX_DIGITS", "100")]);
    assert_eq!(code, 0);
}

#[test]
fn pell_solutions() {
    let v = ok(&["pell", "5"]);
    assert_eq!(v["result"]["fundamental"], serde_json::json!({ "x": "9", "y": "4" }));
    let v = ok(&["pell", "109"]);
    assert_eq!(v["result"]["fundamental"]["x"], "158070671986249");
    assert_eq!(v["result"]["fundamental"]["y"], "15140424455100");
    let v = ok(&["pell", "5", "--count", "3"]);
    assert_eq!(v["result"]["solutions"][2], serde_json::json!({ "x": "2889", "y": "1292" }));
    let v = ok(&["pell", "2009"]);
    assert_eq!(v["result"]["square_factor"], 7);
    assert_eq!(v["result"]["fundamental"]["y"], "3146065416960");
}

#[test]
fn cycle_table() {
    let v = ok(&["cycle", "3"]);
    assert_eq!(v["result"]["k0"], 2);
    assert_eq!(v["result"]["entries"].as_array().unwrap().len(), 2);
    assert!(v["result"]["regulator"]["value"].as_str().unwrap().starts_with("1.31695789692"));
}

#[test]
fn h_wraps_past_the_regulator() {
    let v = ok(&["h", "3", "2.0", "9"]);
    assert_eq!(v["result"]["ideal"], serde_json::json!({ "a": "1", "b": "2" }));
    assert_eq!(v["result"]["gap"]["value"], "0.683042103");
    let v = ok(&["h", "3", "1.2", "9"]);
    assert_eq!(v["result"]["ideal"], serde_json::json!({ "a": "2", "b": "2" }));
    assert_eq!(v["result"]["gap"]["value"], "0.194947461");
}

#[test]
fn exhaustive_distribution() {
    let v = ok(&["qdist", "5", "16", "--exhaustive", "--min-prob", "0"]);
    let r = &v["result"];
    assert_eq!(r["q"], 256);
    let total: f64 = r["distribution"].as_array().unwrap().iter().map(|e| e["p"].as_str().unwrap().parse::<f64>().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-10);
    let bound: f64 = r["amplitude_bound"].as_str().unwrap().parse().unwrap();
    for g in r["good_j"].as_array().unwrap() {
        let p: f64 = g["p"].as_str().unwrap().parse().unwrap();
        assert!(p >= bound, "good j {g}");
    }
}

#[test]
fn sampled_distribution() {
    let v = ok(&["qdist", "13", "16", "--count", "8", "--seed", "2"]);
    assert_eq!(v["result"]["samples"].as_array().unwrap().len(), 8);
    let again = ok(&["qdist", "13", "16", "--count", "8", "--seed", "2"]);
    assert_eq!(v["result"]["samples"], again["result"]["samples"]);
}
