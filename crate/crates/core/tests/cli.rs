use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use wsra::cli::{run, RunConfig};

fn config_path() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("examples/configs/z3_segment.json")
}

fn report(args: &[&str]) -> (i32, Value) {
    let out = run(std::iter::once("wsra").chain(args.iter().copied()));
    let v: Value = serde_json::from_str(&out.report).expect("report is JSON");
    (out.code, v)
}

#[test]
fn partition_info_21() {
    let (code, v) = report(&["partition", "info", "2,1"]);
    assert_eq!(code, 0);
    let o = &v["outputs"];
    assert_eq!(o["corners"], 2);
    assert_eq!(o["content"], 0);
    assert_eq!(o["dim"], 2);
    assert_eq!(o["refl_hom_dim"], 1);
    assert_eq!(o["c_operator"], "not_scalar");
    let keys: Vec<&str> = v.as_object().unwrap().keys().map(String::as_str).collect();
    assert_eq!(keys, ["command", "inputs", "outputs", "status"]);
}

#[test]
fn non_monotone_partition_is_usage_error() {
    let (code, v) = report(&["partition", "info", "0,3"]);
    assert_eq!(code, 2);
    assert!(v["outputs"]["valid_subcommands"]
        .as_array()
        .unwrap()
        .iter()
        .any(|s| s == "partition info"));
    let (code, _) = report(&["partition", "info", "1,3"]);
    assert_eq!(code, 2);
}

#[test]
fn deform_run_converges_on_z3() {
    let cfg = config_path();
    let (code, v) = report(&[
        "deform",
        "run",
        "--config",
        cfg.to_str().unwrap(),
        "--h-max",
        "0.2",
        "--steps",
        "10",
        "--tol",
        "1e-8",
    ]);
    assert_eq!(code, 0, "{v}");
    assert_eq!(v["status"], "converged");
    assert_eq!(v["outputs"]["steps"].as_array().unwrap().len(), 11);
}

#[test]
fn infeasible_segment_is_domain_error() {
    let (code, v) = report(&[
        "rank1",
        "build",
        "--gamma",
        "cyclic:3",
        "--range",
        "0,1",
        "--c",
        r#"{"class_1":[0,0],"class_2":[0,0]}"#,
    ]);
    assert_eq!(code, 1);
    assert_eq!(v["outputs"]["error"]["kind"], "infeasible");
}

#[test]
fn other_subcommands_succeed() {
    let cfg = config_path();
    let cfg = cfg.to_str().unwrap();
    for args in [
        vec!["gamma", "info", "binary_dihedral:3"],
        vec!["wreath", "reflections", "--n", "3", "--gamma", "cyclic:2"],
        vec![
            "wreath",
            "presentation-check",
            "--n",
            "2",
            "--gamma",
            "cyclic:3",
            "--samples",
            "3",
        ],
        vec!["rep", "check", "--config", cfg],
        vec!["hyperplane", "eval", "--config", cfg],
        vec!["rank1", "build", "--config", cfg],
    ] {
        let (code, v) = report(&args);
        assert_eq!(code, 0, "{args:?}: {v}");
        assert_eq!(v["status"], "ok");
    }
}

#[test]
fn reports_are_deterministic_and_reparse() {
    let cfg = config_path();
    let args = ["hyperplane", "eval", "--config", cfg.to_str().unwrap()];
    let a = run(std::iter::once("wsra").chain(args));
    let b = run(std::iter::once("wsra").chain(args));
    assert_eq!(a, b);
    let v: Value = serde_json::from_str(&a.report).unwrap();
    assert_eq!(
        serde_json::from_str::<Value>(&serde_json::to_string(&v).unwrap()).unwrap(),
        v
    );
}

#[test]
fn config_reserializes() {
    let cfg = RunConfig::load(&config_path()).unwrap();
    let text = serde_json::to_string(&cfg).unwrap();
    assert_eq!(RunConfig::from_json_str(&text).unwrap(), cfg);
}

#[test]
fn files_only_with_output_flag() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_wsra"))
        .current_dir(dir.path())
        .args(["partition", "info", "3,3"])
        .output()
        .unwrap();
    assert!(status.status.success());
    assert_eq!(std::fs::read_dir(dir.path()).unwrap().count(), 0);

    let target = dir.path().join("report.json");
    let out = Command::new(env!("CARGO_BIN_EXE_wsra"))
        .current_dir(dir.path())
        .args(["partition", "info", "3,3", "--output", target.to_str().unwrap()])
        .output()
        .unwrap();
    assert!(out.status.success());
    let written: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    let printed: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(written, printed);
    assert_eq!(written["outputs"]["c_operator_value"], "1");
}

#[test]
fn binary_exit_codes() {
    let code = |args: &[&str]| {
        Command::new(env!("CARGO_BIN_EXE_wsra"))
            .args(args)
            .output()
            .unwrap()
            .status
            .code()
    };
    assert_eq!(code(&["gamma", "info", "cyclic:4"]), Some(0));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["gamma", "info", "cyclic:0"]), Some(2));
}

#[test]
fn tolerance_env_override() {
    let out = Command::new(env!("CARGO_BIN_EXE_wsra"))
        .env("WSRA_TOL", "1e-20")
        .args(["rep", "check", "--config", config_path().to_str().unwrap()])
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["outputs"]["tolerance"], 1e-20);
    assert_eq!(v["status"], "violated");
    assert_eq!(out.status.code(), Some(1));
}
