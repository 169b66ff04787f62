use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_stable-cover"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut a = args.to_vec();
    a.push("--json");
    let out = run(&a);
    let code = out.status.code().unwrap();
    let v = if code == 0 || out.stderr.is_empty() {
        serde_json::from_slice(&out.stdout).expect("stdout is JSON")
    } else {
        serde_json::from_slice(&out.stderr).expect("stderr is JSON")
    };
    (v, code)
}

const STD: [&str; 9] = ["--p", "5", "--beta", "1", "--gamma", "4", "--lambda", "tau^2", "--precision"];

#[test]
fn classify_type_1b_at_tau_squared() {
    let mut args = vec!["classify"];
    args.extend(STD);
    args.push("30");
    let (v, code) = json(&args);
    assert_eq!(code, 0);
    assert_eq!(v["type"], "1b");
    assert!(v["subroute"].is_null());
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    let mut want = [
        "input",
        "normalization",
        "type",
        "subroute",
        "extension",
        "components",
        "edges",
        "checks",
        "ms",
    ];
    want.sort();
    let mut got = keys.clone();
    got.sort();
    assert_eq!(got, want);
}

#[test]
fn model_type_3_has_two_genus_two_components() {
    let (v, code) = json(&["model", "--p", "5", "--beta", "2", "--gamma", "1", "--lambda", "5"]);
    assert_eq!(code, 0);
    assert_eq!(v["type"], "3");
    let genera: Vec<u64> = v["components"].as_array().unwrap().iter().map(|c| c["genus"].as_u64().unwrap()).collect();
    assert_eq!(genera, [2, 2]);
    assert_eq!(v["edges"], serde_json::json!([[0, 1, 1]]));
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["passed"] == true));
}

#[test]
fn model_type_2_is_a_mumford_graph() {
    let (v, code) = json(&["model", "--p", "5", "--beta", "1", "--gamma", "4", "--lambda", "5^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["type"], "2");
    assert_eq!(v["edges"], serde_json::json!([[0, 1, 5]]));
}

#[test]
fn deuring_32_is_not_good() {
    let (v, code) = json(&["deuring", "--lambda", "32"]);
    assert_eq!(code, 0);
    assert_eq!(v["good_reduction"], false);
    assert_eq!(v["j_valuation"], "-2");
}

#[test]
fn qwerty_remark_case() {
    let (v, code) = json(&["qwerty", "--p", "5", "--c1", "1", "--c2", "-tau-1", "--precision", "30"]);
    assert_eq!(code, 0);
    assert_eq!(v["type"], "1b");
}

#[test]
fn invalid_inputs_exit_3_with_a_json_error() {
    for args in [
        vec!["classify", "--p", "5", "--beta", "1", "--gamma", "1", "--lambda", "1"],
        vec!["classify", "--p", "5", "--beta", "1", "--gamma", "3", "--lambda", "2"],
        vec!["classify", "--p", "6", "--beta", "1", "--gamma", "1", "--lambda", "2"],
        vec!["classify", "--p", "5", "--beta", "1", "--gamma", "1", "--lambda", "2+"],
    ] {
        let (v, code) = json(&args);
        assert_eq!(code, 3, "{:?}", args);
        assert_eq!(v["error"], "invalid-input");
    }
}

#[test]
fn near_coalescence_exits_2_after_the_retry() {
    let (v, code) = json(&["classify", "--p", "5", "--beta", "1", "--gamma", "1", "--lambda", "1+p^30", "--precision", "2"]);
    assert_eq!(code, 2);
    assert_eq!(v["error"], "insufficient-precision");
    // 4x of 3 digits is enough for v(λ - 1) = 10
    let (v, code) = json(&["classify", "--p", "5", "--beta", "1", "--gamma", "1", "--lambda", "1+p^10", "--precision", "3"]);
    assert_eq!(code, 0, "{}", v);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let args = ["model", "--p", "7", "--beta", "1", "--gamma", "1", "--lambda", "3", "--json"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.stdout, b.stdout);
    let t = run(&["model", "--p", "7", "--beta", "1", "--gamma", "1", "--lambda", "3"]);
    assert_eq!(t.stdout, run(&["model", "--p", "7", "--beta", "1", "--gamma", "1", "--lambda", "3"]).stdout);
}

#[test]
fn timing_is_opt_in() {
    let mut args = vec!["classify"];
    args.extend(STD);
    args.push("20");
    let (v, _) = json(&args);
    assert!(v["ms"].is_null());
    args.push("--timing");
    let (v, _) = json(&args);
    assert!(v["ms"].is_u64());
}

#[test]
fn sweep_p5_conserves_genus_on_every_row() {
    let (v, code) = json(&["sweep", "--p", "5", "--lambdas", "2,3,5,5^2,tau^2,5^3", "--precision", "20"]);
    assert_eq!(code, 0);
    let rows = v["rows"].as_array().unwrap();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["genus_conservation"] == true && r["checks_passed"] == true));
    let total: u64 = v["counts"].as_object().unwrap().values().map(|c| c.as_u64().unwrap()).sum();
    assert_eq!(total as usize, rows.len());
}

#[test]
fn sweep_edge_cases() {
    let (v, code) = json(&["sweep", "--p", "5", "--lambdas", ""]);
    assert_eq!(code, 0);
    assert_eq!(v["rows"], serde_json::json!([]));
    let (v, code) = json(&["sweep", "--p", "5", "--beta", "1", "--gamma", "1", "--lambdas", "1,2"]);
    assert_eq!(code, 0);
    assert_eq!(v["invalid"], serde_json::json!([0]));
    assert_eq!(v["rows"][0]["error"]["error"], "invalid-input");
    assert_eq!(v["rows"][1]["type"], "3");
}

#[test]
fn selftest_passes() {
    let out = run(&["selftest"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{}", text);
    assert_eq!(text.lines().filter(|l| l.contains("PASS")).count(), 4);
}
