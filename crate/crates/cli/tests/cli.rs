use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name).display().to_string()
}

fn nc(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_nc")).args(args).output().expect("run nc");
    let code = out.status.code().expect("exit code");
    let v = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, v)
}

#[test]
fn check_m2() {
    let (code, v) = nc(&["check", &fixture("m2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["associative"], true);
    assert_eq!(v["config"]["verb"], "check");
}

#[test]
fn check_reports_violations_with_exit_1() {
    let (code, v) = nc(&["check", &fixture("m2_perturbed.json")]);
    assert_eq!((code, &v["associative"]), (1, &Value::Bool(false)));
    let (code, v) = nc(&["check", &fixture("sl2_bad.json")]);
    assert_eq!((code, &v["antisymmetric"]), (1, &Value::Bool(false)));
}

#[test]
fn load_errors_exit_2() {
    let (code, v) = nc(&["dual", &fixture("m2_perturbed.json")]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("associativity"));
    let (code, v) = nc(&["dual", &fixture("m2_no_unit.json")]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("unit required"));
    let (code, _) = nc(&["dual", &fixture("missing.json")]);
    assert_eq!(code, 2);
}

#[test]
fn unknown_flags_are_rejected() {
    let (code, _) = nc(&["check", "--bogus", &fixture("m2.json")]);
    assert_eq!(code, 2);
}

#[test]
fn basic_cohomology_of_m2() {
    let (code, v) = nc(&["cohomology", "--kind", "basic", "--max-degree", "4", &fixture("m2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"], serde_json::json!([1, 0, 1, 0, 2]));
    assert_eq!(v["truncated"], false);
}

#[test]
fn hochschild_and_ce() {
    let (_, v) = nc(&["cohomology", "--kind", "hochschild", "--max-degree", "3", &fixture("m2.json")]);
    assert_eq!(v["dims"], serde_json::json!([1, 0, 0, 0]));
    let (_, v) = nc(&["cohomology", "--kind", "ce", "--max-degree", "3", &fixture("sl2.json")]);
    assert_eq!(v["dims"], serde_json::json!([1, 0, 0, 1]));
}

#[test]
fn universal_calculus_dims() {
    let (code, v) = nc(&["calculus", "--kind", "u", "--max-degree", "2", "--emit-gda", &fixture("m2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["dims"], serde_json::json!([4, 12, 36]));
    assert_eq!(v["gda"]["d"].as_array().unwrap().len(), 2);
}

#[test]
fn weil_sl2() {
    let (code, v) = nc(&["weil", "--max-degree", "3", &fixture("sl2.json")]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["basic_cohomology"]["dims"], serde_json::json!([1, 0, 0, 0]));
}

#[test]
fn flat_census_and_input() {
    let (code, v) = nc(&["flat", "--n", "2", "--K", "3"]);
    assert_eq!((code, v["classes"].as_u64()), (0, Some(3)));
    let (code, v) = nc(&["flat", "--n", "2", "--input", &fixture("flat_2_1.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["representatives"][0]["label"], serde_json::json!([2, 1]));
    let (code, _) = nc(&["flat", "--n", "2", "--input", &fixture("not_flat.json")]);
    assert_eq!(code, 1);
}

#[test]
fn symplectic_m2() {
    let (code, v) = nc(&["symplectic", "--n", "2", "--samples", "5"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["poisson_identity"], true);
}

#[test]
fn dual_of_m2() {
    let (code, v) = nc(&["dual", &fixture("m2.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["a_dual_dim"], 1);
    assert_eq!(v["diagonal"], true);
}

#[test]
fn symbols_census() {
    let (code, v) = nc(&["symbols", "--count", "3", "--seed", "1"]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["first_order_recovered"], 3);
}

#[test]
fn ym_flow_is_deterministic() {
    let dir = std::env::temp_dir().join(format!("nc-ym-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let out = dir.join("report.json");
    let args = ["ym-flow", "--K", "2", "--seeds", "3", "--out", out.to_str().unwrap()];
    let (code, a) = nc(&args);
    let (_, b) = nc(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(written["runs"].as_array().unwrap().len(), 3);
    std::fs::remove_dir_all(dir).ok();
}
