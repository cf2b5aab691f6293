use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn mixvol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mixvol")).args(args).env_remove("MIXVOL_TOL").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write_tmp(name: &str, contents: &str) -> String {
    let dir = std::env::temp_dir().join(format!("mixvol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let p: PathBuf = dir.join(name);
    std::fs::write(&p, contents).unwrap();
    p.to_str().unwrap().to_owned()
}

#[test]
fn isop_of_cube_file() {
    let cube = write_tmp(
        "cube.json",
        r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0],[0,0,1],[1,1,0],[1,0,1],[0,1,1],[1,1,1]]}"#,
    );
    let out = mixvol(&["isop", &cube, "--facets"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["isop"].as_f64().unwrap(), 2.0);
    assert_eq!(v["facets"].as_array().unwrap().len(), 6);
    assert!(v["anchor"].is_string() && v["method"].is_string() && v["tol"].is_number());
}

#[test]
fn simplex_is_not_excluded() {
    let out = mixvol(&["exclude", "Delta_3"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["verdict"], "inconclusive");
    let boxed = write_tmp("box.json", r#"{"kind":"box","sides":["2","1","1"]}"#);
    let out = mixvol(&["exclude", &boxed]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["verdict"], "excluded");
}

#[test]
fn input_errors_exit_2() {
    assert_eq!(mixvol(&["compute", "--bodies", "C_3"]).status.code(), Some(2));
    let bad = write_tmp("bad.json", "{\"dim\": 3, \"vertices\": [");
    let out = mixvol(&["isop", &bad]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(mixvol(&["isop", "/nonexistent/k.json"]).status.code(), Some(2));
    assert_eq!(mixvol(&["frobnicate"]).status.code(), Some(2));
    let flat = write_tmp("flat.json", r#"{"dim":3,"vertices":[[0,0,0],[1,0,0],[0,1,0]]}"#);
    assert_eq!(mixvol(&["isop", &flat]).status.code(), Some(2));
}

#[test]
fn compute_cross_validates_methods() {
    let seg = write_tmp("seg.json", r#"{"dim":3,"vertices":[[0,0,0],[1,1,0]]}"#);
    let out = mixvol(&["compute", "--bodies", &seg, "O_3", "O_3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["value"]["exact"], "2/3");
    assert_eq!(v["results"].as_array().unwrap().len(), 3);
    assert!(v["discrepancy"].as_f64().unwrap() < 1e-9);
    let csv = mixvol(&["compute", "--bodies", &seg, "O_3", "O_3", "--csv"]);
    assert!(String::from_utf8(csv.stdout).unwrap().starts_with("method,value\n"));
}

#[test]
fn tolerance_from_environment() {
    let out = Command::new(env!("CARGO_BIN_EXE_mixvol")).args(["exclude", "C_3"]).env("MIXVOL_TOL", "0.25").output().unwrap();
    assert_eq!(json(&out)["tol"].as_f64().unwrap(), 0.25);
    assert_eq!(mixvol(&["exclude", "C_3", "--tol", "-1"]).status.code(), Some(2));
}

#[test]
fn bezout_octahedron_grid_one() {
    let out = mixvol(&["bezout", "O_3", "--grid", "1"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["u"], serde_json::json!([1, 1, 0]));
    assert_eq!(v["v"], serde_json::json!([1, -1, 0]));
    assert_eq!(v["witness"]["ratio"], "2");
    assert_eq!(v["seed"], 0);
    assert_eq!(mixvol(&["bezout", "Delta_3", "--grid", "1"]).status.code(), Some(1));
}

#[test]
fn wulff_pointwise_and_sweep() {
    let f = write_tmp(
        "f.json",
        r#"{"entries":[{"normal":[1,0,0],"value":"1/2"},{"normal":[0,1,0],"value":"-1/3"},{"normal":[0,0,1],"value":"1"},
            {"normal":[-1,0,0],"value":"0"},{"normal":[0,-1,0],"value":"1/5"},{"normal":[0,0,-1],"value":"-1"}]}"#,
    );
    let out = mixvol(&["wulff", "C_3", "--f", &f, "--check", "pointwise"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["pointwise"].as_array().unwrap().len(), 6);
    let out = mixvol(&["wulff", "C_3", "--f", &f, "--t-values", "1/10,1/5", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().next(), Some("t,volume,mixed_volume"));
    assert_eq!(text.lines().count(), 3);
    let missing = write_tmp("g.json", r#"{"entries":[{"normal":[1,0,0],"value":"1"}]}"#);
    assert_eq!(mixvol(&["wulff", "C_3", "--f", &missing]).status.code(), Some(2));
}

#[test]
fn examples_and_ellipsoid() {
    let out = mixvol(&["examples", "--format", "markdown"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().starts_with("| example |"));
    let out = mixvol(&["ellipsoid", "--n", "3", "--a", "20.78"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["isop"]["value"].as_f64().unwrap() < 1.0);
    assert_eq!(mixvol(&["ellipsoid", "--n", "3", "--a", "0.5"]).status.code(), Some(2));
}

#[test]
fn reruns_are_byte_identical() {
    for args in [
        &["exclude", "C_3", "--search-affine", "--budget", "80", "--seed", "11"][..],
        &["probe", "--generator", "zonotope", "--trials", "2", "--budget", "40", "--seed", "5"][..],
        &["bezout", "C_3", "--grid", "1", "--budget", "32", "--seed", "3"][..],
    ] {
        let a = mixvol(args);
        let b = mixvol(args);
        assert!(a.status.code().unwrap() <= 1);
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}
