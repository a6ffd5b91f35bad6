use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn lens_scatter(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lens-scatter"))
        .args(args)
        .env_remove("LENS_SCATTER_THREADS")
        .output()
        .unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn version_and_help_exit_zero() {
    let v = lens_scatter(&["--version"]);
    assert_eq!(v.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&v.stdout).contains(env!("CARGO_PKG_VERSION")));
    assert_eq!(lens_scatter(&["invariant", "--help"]).status.code(), Some(0));
}

#[test]
fn bad_arguments_exit_two() {
    assert_eq!(lens_scatter(&["scatter", "--arc", "0.1"]).status.code(), Some(2));
    assert_eq!(lens_scatter(&["compare", "--m1", "vacuum", "--m2", "eaton", "--grid", "1x1"]).status.code(), Some(2));
    assert_eq!(lens_scatter(&["approx-pl", "--curve", "lemniscate", "--eps", "3"]).status.code(), Some(2));
    let threads = Command::new(env!("CARGO_BIN_EXE_lens-scatter"))
        .args(["invariant", "--curve", "circle"])
        .env("LENS_SCATTER_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(threads.status.code(), Some(2));
}

#[test]
fn a_failed_equality_check_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let bump = dir.path().join("bump.json");
    let profile: Vec<[f64; 2]> = (0..=10)
        .map(|i| {
            let r = i as f64 / 10.0;
            [r, 1.0 + 0.3 * (1.0 - r * r)]
        })
        .collect();
    let metric = serde_json::json!({ "kind": "radial-profile", "profile": profile });
    fs::write(&bump, metric.to_string()).unwrap();
    let bump = bump.to_str().unwrap();

    let args = ["compare", "--m1", "vacuum", "--m2", bump, "--grid", "4x2"];
    let report = json(&lens_scatter(&args));
    assert_eq!(report["command"], "compare");
    let mut strict = args.to_vec();
    strict.push("--expect-equal");
    assert_eq!(lens_scatter(&strict).status.code(), Some(1));
}

#[test]
fn invariant_reports_the_lemniscate_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("table.json");
    let status = lens_scatter(&["invariant", "--curve", "lemniscate", "--out", out.to_str().unwrap()]);
    assert!(status.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["W"], serde_json::json!({ "2": 1 }));
    assert_eq!(v["windings"]["line"], 0);
    let crossing = &v["crossings"][0];
    for key in ["l", "l'", "sign", "type"] {
        assert!(!crossing[key].is_null(), "missing {key}");
    }
    assert_eq!(v["certificate"]["kind"], "nonzero_invariant");
    assert_eq!(v["certificate"]["g"], 2);
}

#[test]
fn invariant_of_the_circle_is_empty_but_certified() {
    let v = json(&lens_scatter(&["invariant", "--curve", "circle"]));
    assert_eq!(v["W"], serde_json::json!({}));
    assert_eq!(v["certificate"]["kind"], "non_contractible");
}

#[test]
fn approx_pl_writes_a_positive_separation_report() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("c.csv");
    let mut text = String::from("t,x,y\n");
    for i in 0..64 {
        let t = i as f64 / 64.0;
        let a = std::f64::consts::TAU * t;
        text.push_str(&format!("{t},{},{}\n", 0.6 * a.sin(), 0.3 * (2.0 * a).sin()));
    }
    fs::write(&curve, text).unwrap();
    let report = dir.path().join("sep.csv");
    let out = lens_scatter(&[
        "approx-pl",
        "--curve",
        curve.to_str().unwrap(),
        "--eps",
        "0.2",
        "--stages",
        "3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let csv = fs::read_to_string(&report).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("l,s,n,separation"));
    let rows: Vec<f64> = lines.map(|l| l.rsplit(',').next().unwrap().parse().unwrap()).collect();
    assert_eq!(rows.len(), 9);
    assert!(rows.iter().all(|&d| d > 0.0));
}

#[test]
fn svg_output_is_written_alongside_the_report() {
    let dir = tempfile::tempdir().unwrap();
    let svg = dir.path().join("lift.svg");
    let out = lens_scatter(&["--emit-svg", svg.to_str().unwrap(), "invariant", "--curve", "lemniscate"]);
    assert!(out.status.success());
    assert!(fs::read_to_string(&svg).unwrap().starts_with("<svg"));
}

#[test]
fn reports_are_reproducible() {
    let args = ["--seed", "7", "invariant", "--random-corpus", "3"];
    assert_eq!(lens_scatter(&args).stdout, lens_scatter(&args).stdout);
}
