//! End-to-end checks of the quadham binary: output formats, flag parsing
//! and the exit-code contract (0 ok, 1 internal, 2 validation).

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> PathBuf {
    let mut p = PathBuf::from(env!("CARGO_BIN_EXE_quadham"));
    assert!(p.exists(), "binary not built: {}", p.display());
    p = p.canonicalize().unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().expect("spawn quadham")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn analyze_builtin_json() {
    let out = run(&["analyze", "--builtin", "oned", "--b", "0.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["model"], "oned");
    assert_eq!(v["classification"], "AllReal");
    let lam = v["eigenvalues"][1][0].as_f64().unwrap();
    assert!((lam - 3.0f64.sqrt()).abs() < 1e-10);
    let e0 = v["e0"][0].as_f64().unwrap();
    assert!((e0 - 0.75f64.sqrt()).abs() < 1e-9);
}

#[test]
fn analyze_complex_b_flag() {
    let out = run(&["analyze", "--builtin", "coupled_xy", "--a", "2", "--b", "0,1.5"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "Complex");
}

#[test]
fn sweep_csv_shape() {
    let out = run(&[
        "sweep", "--builtin", "oned", "--param", "b_real", "--range", "-2:2", "--steps", "41",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut lines = text.lines();
    let header = lines.next().unwrap();
    assert_eq!(
        header,
        "param,re_lambda_1,re_lambda_2,im_lambda_1,im_lambda_2,classification,min_gap,status"
    );
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 41);
    assert!(rows.iter().all(|r| r.ends_with(",ok")));
    assert!(text.ends_with('\n'));
}

#[test]
fn sweep_json_format() {
    let out = run(&[
        "sweep", "--builtin", "angular", "--a", "2", "--param", "b_imag", "--range", "0:1",
        "--steps", "5", "--format", "json",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 5);
    assert_eq!(v[0]["classification"], "AllReal");
    assert_eq!(v[4]["classification"], "Complex");
}

#[test]
fn ep_find_oned_boundary() {
    let out = run(&[
        "ep-find", "--builtin", "oned", "--param", "b_real", "--range", "0.5:1.5",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let param = v["param"].as_f64().unwrap();
    assert!((param - 1.0).abs() < 1e-7);
    assert_eq!(v["algebraic"], 2);
    assert_eq!(v["geometric"], 1);
}

#[test]
fn evolve_csv() {
    let out = run(&["evolve", "--builtin", "oned", "--times", "0:1:3"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let header = text.lines().next().unwrap();
    assert!(header.starts_with("t,re_c_1_1,im_c_1_1,"));
    assert_eq!(text.lines().count(), 4);
    // first sample is the identity
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first.len(), 9);
    let c11: f64 = first[1].parse().unwrap();
    assert!((c11 - 1.0).abs() < 1e-12);
}

#[test]
fn symmetry_check_model_file() {
    let dir = std::env::temp_dir().join("quadham_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("model.json");
    std::fs::write(
        &path,
        r#"{
            "model": "oned", "b": [0.0, 0.8],
            "symmetries": [
              { "kind": "antiunitary", "label": "custom PT",
                "matrix": [[[-1,0],[0,0]],[[0,0],[1,0]]] }
            ]
        }"#,
    )
    .unwrap();
    let out = run(&["symmetry-check", "--model", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let arr = v.as_array().unwrap();
    // builtin catalog plus the file-supplied symmetry
    assert!(arr.iter().any(|s| s["label"] == "custom PT"));
    for s in arr {
        assert_eq!(s["commutes"], true, "symmetry {} failed", s["label"]);
        assert_eq!(s["u_relation"], true);
    }
}

#[test]
fn verify_subcommand_passes() {
    let out = run(&["verify"]);
    assert!(out.status.success(), "verify failed:\n{}", stdout(&out));
    let text = stdout(&out);
    assert!(text.lines().filter(|l| l.starts_with("PASS")).count() >= 20);
    assert!(!text.contains("FAIL "));
}

#[test]
fn validation_errors_exit_2() {
    for args in [
        vec!["analyze", "--builtin", "bogus"],
        vec!["analyze"],
        vec!["sweep", "--builtin", "oned", "--param", "nope", "--range", "0:1"],
        vec!["sweep", "--builtin", "oned", "--param", "b_real", "--range", "1:0"],
        vec!["ep-find", "--builtin", "oned", "--param", "b_real", "--range", "0:0.5"],
        vec!["evolve", "--builtin", "oned", "--times", "0:1:1"],
        vec!["analyze", "--builtin", "coupled_xy", "--a", "-1"],
    ] {
        let out = run(&args);
        assert_eq!(
            out.status.code(),
            Some(2),
            "args {:?} gave {:?}: {}",
            args,
            out.status.code(),
            String::from_utf8_lossy(&out.stderr)
        );
    }
}

#[test]
fn model_file_validation_exit_2() {
    let dir = std::env::temp_dir().join("quadham_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("bad.json");
    std::fs::write(&path, r#"{ "model": "oned", "K": 3 }"#).unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let missing = dir.join("does_not_exist.json");
    let out = run(&["analyze", "--model", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn out_flag_writes_file() {
    let dir = std::env::temp_dir().join("quadham_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("sweep.csv");
    let out = run(&[
        "sweep", "--builtin", "coupled_pp", "--a", "2", "--param", "b_real", "--range",
        "0:3", "--steps", "7", "--out", path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 8);
}

#[test]
fn custom_gamma_model() {
    let dir = std::env::temp_dir().join("quadham_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("custom.json");
    // gamma = diag-free harmonic oscillator: H = x² + p², λ = ±2
    std::fs::write(
        &path,
        r#"{ "model": "custom", "gamma": [[[1,0],[0,0]],[[0,0],[1,0]]] }"#,
    )
    .unwrap();
    let out = run(&["analyze", "--model", path.to_str().unwrap()]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["classification"], "AllReal");
    assert!((v["eigenvalues"][1][0].as_f64().unwrap() - 2.0).abs() < 1e-10);
}
