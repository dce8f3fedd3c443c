use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "fixtures", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn veechkit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_veechkit")).args(args).env_remove("VEECHKIT_BUDGET").output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn json(args: &[&str]) -> (i32, Value) {
    let mut a = vec!["--json"];
    a.extend_from_slice(args);
    let o = veechkit(&a);
    (code(&o), serde_json::from_slice(&o.stdout).unwrap())
}

#[test]
fn info_reports_type_1_6() {
    let (c, v) = json(&["info", &fixture("exm1.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["punctures"], 6);
    assert_eq!(v["orders"], serde_json::json!([-1, -1, -1, 0, 0, 3]));
}

#[test]
fn shear_is_rejected_and_its_square_accepted() {
    let f = fixture("exm1.json");
    let (c, v) = json(&["member", &f, "-m", "1,1;0,1"]);
    assert_eq!((c, v["verdict"].as_str()), (1, Some("NotMember")));
    assert_eq!(v["reason"], "PrefilterFail");
    let (c, v) = json(&["member", &f, "-m", "1,1;0,1", "--no-prefilter"]);
    assert_eq!((c, v["reason"].as_str()), (1, Some("NoIsomorphism")));
    let (c, v) = json(&["member", &f, "-m", "1,2;0,1"]);
    assert_eq!((c, v["verdict"].as_str()), (0, Some("Member")));
    assert!(v["certificate"]["isomorphism"]["sigma"].is_array());
}

#[test]
fn pillowcase_tables() {
    let f = fixture("pillowcase.json");
    let o = veechkit(&["member", &f, "-m", "1,1;0,1", "--marked", "--tables"]);
    assert_eq!(code(&o), 1);
    let out = String::from_utf8(o.stdout).unwrap();
    assert!(out.contains("a->(1-) b->(2-) c->(2) d->(1)"), "{out}");
    let o = veechkit(&["member", &f, "-m", "1,2;0,1", "--marked"]);
    assert_eq!(code(&o), 0);
}

#[test]
fn l23_group_is_finite() {
    let (c, v) = json(&["group", &fixture("l23.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["index"], 9);
    assert_eq!(v["cosets"].as_array().unwrap().len(), 9);
}

#[test]
fn iso_compares_files() {
    let (a, b) = (fixture("exm1.json"), fixture("torus.json"));
    assert_eq!(code(&veechkit(&["iso", &a, &a])), 0);
    assert_eq!(code(&veechkit(&["iso", &a, &b])), 1);
    let p = fixture("pillowcase.json");
    assert_eq!(code(&veechkit(&["iso", &p, &p, "--marked"])), 0);
}

#[test]
fn refine_and_act_emit_documents() {
    let (c, v) = json(&["act", &fixture("exm1.json"), "-m", "1,1;0,1"]);
    assert_eq!(c, 0);
    assert_eq!(v["theta"], serde_json::json!([["1", "0"], ["1", "1"]]));
    assert_eq!(v["k_sq"], "2");
    let (c, v) = json(&["refine", &fixture("exm1.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["n"], 6);
}

#[test]
fn double_cover_and_dot() {
    let (c, v) = json(&["double-cover", &fixture("pillowcase.json")]);
    assert_eq!(c, 0);
    assert_eq!(v["genus"], 1);
    assert_eq!(v["connected"], true);
    let o = veechkit(&["dot", &fixture("l23.json"), "--schreier"]);
    assert_eq!(code(&o), 0);
    let dot = String::from_utf8(o.stdout).unwrap();
    assert!(dot.starts_with("digraph") && dot.contains("style=dashed"));
}

#[test]
fn json_output_is_stable() {
    for args in [
        vec!["--json", "info"],
        vec!["--json", "member", "-m", "1,2;0,1"],
        vec!["--json", "group"],
        vec!["--json", "canon"],
    ] {
        let f = fixture("exm1.json");
        let mut a = args.clone();
        a.push(&f);
        let (x, y) = (veechkit(&a), veechkit(&a));
        assert_eq!(x.stdout, y.stdout);
    }
}

#[test]
fn validation_failures_are_negative() {
    let dir = std::env::temp_dir().join(format!("veechkit-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    // y(1) = 1- violates the non-branching axiom.
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"n": 1, "x": [[1]], "y": [[1, -1]]}"#).unwrap();
    let o = veechkit(&["validate", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 1, "{}", String::from_utf8_lossy(&o.stdout));
    assert_eq!(code(&veechkit(&["validate", &fixture("half_octagon.json")])), 0);
    assert_eq!(code(&veechkit(&["info", bad.to_str().unwrap()])), 3);
}

#[test]
fn input_errors_exit_3() {
    let f = fixture("exm1.json");
    let o = veechkit(&["member", &f, "-m", "1,x;0,1"]);
    assert_eq!(code(&o), 3);
    assert!(String::from_utf8(o.stderr).unwrap().contains("offset 2"));
    assert_eq!(code(&veechkit(&["member", &f, "-m", "1,1;1,1"])), 3);
    assert_eq!(code(&veechkit(&["info", "/nonexistent.json"])), 3);
    assert_eq!(code(&veechkit(&["frobnicate"])), 3);
    let o = Command::new(env!("CARGO_BIN_EXE_veechkit"))
        .args(["member", &f, "-m", "1,2;0,1"])
        .env("VEECHKIT_BUDGET", "lots")
        .output()
        .unwrap();
    assert_eq!(code(&o), 3);
}

#[test]
fn tiny_budget_gives_unknown() {
    let f = fixture("octagon.json");
    let o = Command::new(env!("CARGO_BIN_EXE_veechkit"))
        .args(["member", &f, "-m", "1/2*w,-1/2*w;1/2*w,1/2*w"])
        .env("VEECHKIT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(code(&o), 2, "{}", String::from_utf8_lossy(&o.stdout));
}
