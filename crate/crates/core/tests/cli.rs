use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};
use tempfile::TempDir;

fn lefschetz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lefschetz")).args(args).output().expect("binary runs")
}

fn write(dir: &TempDir, name: &str, value: &Value) -> String {
    let path: PathBuf = dir.path().join(name);
    std::fs::write(&path, serde_json::to_vec_pretty(value).unwrap()).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("report is JSON")
}

fn stderr(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

fn std_omega(n: usize) -> Value {
    let mut rows = vec![vec![0.0; 2 * n]; 2 * n];
    for j in 0..n {
        rows[2 * j][2 * j + 1] = 1.0;
        rows[2 * j + 1][2 * j] = -1.0;
    }
    json!({ "n": n, "matrix": rows })
}

fn std_j(n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![0.0; 2 * n]; 2 * n];
    for j in 0..n {
        rows[2 * j + 1][2 * j] = 1.0;
        rows[2 * j][2 * j + 1] = -1.0;
    }
    rows
}

#[test]
fn verify_core_passes_and_is_byte_stable() {
    let args = ["verify", "--suite", "core", "--n", "2", "--trials", "100", "--seed", "7"];
    let first = lefschetz(&args);
    assert_eq!(first.status.code(), Some(0), "{}", stderr(&first));
    let report = stdout_json(&first);
    assert_eq!(report["pass"], json!(true));
    let star: Vec<&Value> = report["records"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["id"] == json!("core.star_involution"))
        .collect();
    assert_eq!(star.len(), 1);
    assert!(star[0]["value"].as_f64().unwrap() <= 1e-9);
    let second = lefschetz(&args);
    assert_eq!(first.stdout, second.stdout);
}

#[test]
fn verify_failure_exits_one() {
    let out = lefschetz(&["verify", "--suite", "core", "--n", "2", "--trials", "3", "--tol", "1e-30"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stdout_json(&out)["pass"], json!(false));
}

#[test]
fn verify_text_format() {
    let out = lefschetz(&["verify", "--suite", "sl2", "--n", "1", "--trials", "2", "--format", "text"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.lines().any(|l| l.starts_with("PASS sl2.lowering")));
    assert!(text.trim_end().ends_with("pass (3 checks)"));
}

#[test]
fn decompose_e1f1() {
    let dir = TempDir::new().unwrap();
    let omega = write(&dir, "std2.json", &std_omega(2));
    let form = write(&dir, "u.json", &json!({ "n": 2, "terms": [{ "blade": [0, 1], "re": 1.0 }] }));
    let out = lefschetz(&["decompose", "--omega", &omega, "--form", &form]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    let comps = report["components"].as_array().unwrap();
    assert_eq!(comps.len(), 2);
    let by_r = |r: u64| comps.iter().find(|c| c["r"] == json!(r)).unwrap()["form"]["terms"].clone();
    let scalar = by_r(1);
    assert_eq!(scalar.as_array().unwrap().len(), 1);
    assert!((scalar[0]["re"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    let prim = by_r(0);
    let coef = |blade: Value| {
        prim.as_array().unwrap().iter().find(|t| t["blade"] == blade).unwrap()["re"].as_f64().unwrap()
    };
    assert!((coef(json!([0, 1])) - 0.5).abs() < 1e-12);
    assert!((coef(json!([2, 3])) + 0.5).abs() < 1e-12);
    assert!(report["reconstruction_residual"].as_f64().unwrap() < 1e-12);
}

#[test]
fn star_defaults_to_standard_form() {
    let dir = TempDir::new().unwrap();
    // *_s(e1*∧f1*) = e2*∧f2* for the standard form on R^4
    let form = write(&dir, "u.json", &json!({ "n": 2, "terms": [{ "blade": [0, 1], "re": 1.0 }] }));
    let out = lefschetz(&["star", "--form", &form]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let terms = stdout_json(&out)["terms"].clone();
    assert_eq!(terms.as_array().unwrap().len(), 1);
    assert_eq!(terms[0]["blade"], json!([2, 3]));
    assert!((terms[0]["re"].as_f64().unwrap() - 1.0).abs() < 1e-12);

    let hodge = lefschetz(&["star", "--form", &form, "--hodge"]);
    assert_eq!(hodge.status.code(), Some(0), "{}", stderr(&hodge));
}

#[test]
fn darboux_of_scaled_form() {
    let dir = TempDir::new().unwrap();
    let omega = write(&dir, "w.json", &json!({ "n": 1, "matrix": [[0.0, 4.0], [-4.0, 0.0]] }));
    let out = lefschetz(&["darboux", "--omega", &omega]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let report = stdout_json(&out);
    let q = &report["matrix"];
    assert!((q[0][0].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((q[1][1].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!(q[0][1].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn mixed_hr_standard_collection() {
    let dir = TempDir::new().unwrap();
    let w = std_omega(2)["matrix"].clone();
    let input = write(&dir, "mc.json", &json!({ "n": 2, "J": std_j(2), "alphas": [w, w, w] }));
    let out = lefschetz(&["mixed-hr", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let blocks = stdout_json(&out);
    let block = blocks.as_array().unwrap().iter().find(|b| b["pq"] == json!([1, 1])).unwrap();
    assert_eq!(block["dimension"], json!(3));
    assert!(block["min_eigenvalue"].as_f64().unwrap() > 0.0);
    assert_eq!(block["gram"].as_array().unwrap().len(), 3);
}

#[test]
fn af_and_psi_on_valid_input() {
    let dir = TempDir::new().unwrap();
    let w = std_omega(3)["matrix"].clone();
    let mut w2 = w.clone();
    for row in w2.as_array_mut().unwrap() {
        for x in row.as_array_mut().unwrap() {
            *x = json!(x.as_f64().unwrap() * 2.0);
        }
    }
    let input = write(&dir, "af.json", &json!({ "n": 3, "alpha1": w, "alpha2": w2, "t_factors": [w] }));
    let out = lefschetz(&["af", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    assert_eq!(stdout_json(&out)["holds"], json!(true));

    let out = lefschetz(&["psi", "--input", &input]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let scan = stdout_json(&out);
    assert_eq!(scan["samples"].as_array().unwrap().len(), 33);
    assert_eq!(scan["convex"], json!(true));
}

#[test]
fn af_rejects_non_positive_alpha_naming_it() {
    let dir = TempDir::new().unwrap();
    let w = std_omega(2)["matrix"].clone();
    let neg = json!([[0.0, -1.0, 0.0, 0.0], [1.0, 0.0, 0.0, 0.0], [0.0, 0.0, 0.0, -1.0], [0.0, 0.0, 1.0, 0.0]]);
    let input = write(&dir, "bad.json", &json!({ "n": 2, "alpha1": w, "alpha2": neg, "t_factors": [] }));
    let out = lefschetz(&["af", "--input", &input]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("#2") && msg.contains("alpha2"), "{msg}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = TempDir::new().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"n\": 2,\n  \"terms\": [oops]\n}\n").unwrap();
    let out = lefschetz(&["star", "--form", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let msg = stderr(&out);
    assert!(msg.contains("line 3") && msg.contains("column"), "{msg}");
}

#[test]
fn dimension_cap_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let form = write(&dir, "big.json", &json!({ "n": 8, "terms": [] }));
    let out = lefschetz(&["star", "--form", &form]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).contains("n = 8"), "{}", stderr(&out));
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(lefschetz(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(lefschetz(&["verify", "--suite", "nope"]).status.code(), Some(2));
}
