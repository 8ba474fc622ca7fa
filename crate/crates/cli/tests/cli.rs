use std::fs;
use std::process::{Command, Output};

use serde_json::{json, Value};

fn paracyc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_paracyc")).args(args).env_remove("PARACYC_MAX_DEGREE").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

/// Trivial structure on Q through degree 3 with one face scaled by 2.
fn broken_structure() -> Value {
    let m = 3;
    let mut faces: Vec<Vec<Value>> = (1..=m).map(|k| (0..=k).map(|_| json!([["1"]])).collect()).collect();
    faces[1][0] = json!([["2"]]);
    json!({ "name": "broken", "max_degree": m, "ranks": [1, 1, 1, 1], "faces": faces, "t": vec![json!([["1"]]); m + 1] })
}

#[test]
fn verify_trivial_passes_at_degree_eight() {
    let o = paracyc(&["verify", "--example", "trivial-Q", "--max-degree", "8", "--suite", "all"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("result: PASS"));
}

#[test]
fn broken_face_relation_exits_one_and_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, broken_structure().to_string()).unwrap();
    let o = paracyc(&["verify", "--structure", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert!(text.contains("FAIL axioms: d_0 d_1 = d_0 d_0"), "{text}");
    assert!(text.contains("result: FAIL"));
}

#[test]
fn max_degree_below_two_is_a_usage_error() {
    let o = paracyc(&["verify", "--example", "trivial-Q", "--max-degree", "1"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn unknown_example_and_missing_file_are_input_errors() {
    assert_eq!(paracyc(&["verify", "--example", "nope"]).status.code(), Some(2));
    assert_eq!(paracyc(&["verify", "--structure", "/nonexistent/s.json"]).status.code(), Some(2));
    assert_eq!(paracyc(&["verify"]).status.code(), Some(2));
}

#[test]
fn env_var_sets_default_window() {
    let o = Command::new(env!("CARGO_BIN_EXE_paracyc"))
        .args(["homology", "--example", "trivial-Q", "--format", "json"])
        .env("PARACYC_MAX_DEGREE", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ranks"], json!([1, 0, 1, 0]));
}

#[test]
fn trivial_cyclic_homology_ranks() {
    let o = paracyc(&["homology", "--example", "trivial-Q", "--theory", "cyclic", "--max-degree", "6"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("ranks: 1,0,1,0,1,0,1"));
    let o = paracyc(&["homology", "--example", "trivial-Q", "--theory", "hochschild", "--max-degree", "6", "--format", "json"]);
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["ranks"], json!([1, 0, 0, 0, 0, 0, 0]));
}

#[test]
fn homology_theories_agree_on_cyclic_ranks() {
    let ranks = |theory: &str| {
        let o = paracyc(&["homology", "--example", "group-Z2-phi-g", "--theory", theory, "--max-degree", "3", "--format", "json"]);
        serde_json::from_slice::<Value>(&o.stdout).unwrap()["ranks"].clone()
    };
    assert_eq!(ranks("cyclic"), ranks("lambda"));
    assert_eq!(ranks("cyclic"), ranks("cc"));
}

#[test]
fn convert_cocycle_trivial() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.json");
    fs::write(&input, json!({ "degree": 2, "components": [["1"], ["1"]] }).to_string()).unwrap();
    let out = dir.path().join("out.json");
    let o = paracyc(&[
        "convert-cocycle",
        "--example",
        "trivial-Q",
        "--input",
        input.to_str().unwrap(),
        "--format",
        "json",
        "--output",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["components"], json!([["1/2"]]));
    assert!(v["certificate"].is_object());
    assert!(v["checks"].as_array().unwrap().iter().all(|c| c["status"] == "pass"));
}

#[test]
fn convert_cocycle_rejects_non_cocycle() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("phi.json");
    // b^* of the degree-1 functional is nonzero on the trivial module
    fs::write(&input, json!({ "degree": 1, "components": [["1"]] }).to_string()).unwrap();
    let o = paracyc(&["convert-cocycle", "--example", "trivial-Q", "--input", input.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2), "{}", stdout(&o));
}

#[test]
fn compare_group_z2_ranks_agree() {
    let o = paracyc(&["compare", "--example", "group-Z2-phi-g", "--max-degree", "5", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    for r in rows {
        assert_eq!(r["lambda"], r["double_natural"]);
        assert_eq!(r["agree"], true);
    }
}

#[test]
fn perturb_demo_matches_closed_forms() {
    let o = paracyc(&["perturb-demo", "--example", "trivial-Q", "--max-degree", "5"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).contains("negative control"));
}

#[test]
fn output_is_deterministic_in_every_format() {
    for format in ["text", "json", "csv"] {
        let args = ["verify", "--example", "sign-twisted", "--max-degree", "3", "--format", format];
        assert_eq!(paracyc(&args).stdout, paracyc(&args).stdout, "{format}");
    }
}

#[test]
fn csv_has_header_row() {
    let o = paracyc(&["verify", "--example", "trivial-Q", "--max-degree", "3", "--suite", "axioms", "--format", "csv"]);
    let text = stdout(&o);
    assert_eq!(text.lines().next(), Some("identity,degree,status,witness"));
}
