use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::tempdir;

fn magnitude(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_magnitude")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn write_triangle(dir: &Path) -> String {
    // Equilateral with side ln 2.
    let t = 2f64.ln();
    let path = dir.join("tri.csv");
    fs::write(&path, format!("x,y\n0,0\n{t},0\n{},{}\n", t / 2.0, t * 3f64.sqrt() / 2.0)).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn compute_three_point_weighting() {
    let dir = tempdir().unwrap();
    let input = write_triangle(dir.path());
    let out = magnitude(&["compute", "--input", &input, "--scale", "1", "--mode", "weighting"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert_eq!(v["coefficients"].as_array().unwrap().len(), 3);
    assert_eq!(v["meta"]["seed"], 0);
    assert_eq!(v["meta"]["version"], env!("CARGO_PKG_VERSION"));

    let out = magnitude(&["compute", "--input", &input, "--mode", "diversifier", "--tolerance", "1e-10"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["value"].as_f64().unwrap() - 1.5).abs() < 1e-12);
    assert_eq!(v["meta"]["tolerance"], 1e-10);
}

#[test]
fn usage_and_domain_errors() {
    assert_eq!(magnitude(&["compute"]).status.code(), Some(2));
    assert_eq!(magnitude(&["compute", "--input", "x.csv", "--mode", "bogus"]).status.code(), Some(2));
    assert_eq!(magnitude(&["nonsense"]).status.code(), Some(2));
    let dir = tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    let out = magnitude(&["compute", "--input", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let input = write_triangle(dir.path());
    assert_eq!(magnitude(&["compute", "--input", &input, "--scale=-1"]).status.code(), Some(1));
}

#[test]
fn check_suite_is_satisfied_and_reproducible() {
    let args = ["check", "--suite", "weighting-bound", "--trials", "100", "--seed", "7"];
    let a = magnitude(&args);
    assert!(a.status.success());
    let v = json(&a);
    assert_eq!(v["report"]["satisfied"], 100);
    assert_eq!(v["report"]["entries"].as_array().unwrap().len(), 100);
    assert_eq!(a.stdout, magnitude(&args).stdout);
    let b = magnitude(&["check", "--suite", "diversity-ratio", "--trials", "20", "--seed", "7"]);
    assert!(b.status.success());
}

#[test]
fn preprocess_then_features() {
    let dir = tempdir().unwrap();
    let n = 500 * 7;
    let signal: String = (0..n).map(|i| format!("{}\n", (i as f64 / 500.0 * std::f64::consts::TAU).sin())).collect();
    let sig = dir.path().join("sig.csv");
    fs::write(&sig, signal).unwrap();
    let root = dir.path().join("segs");
    for label in ["alice", "bob"] {
        let outdir = root.join(label);
        let out = magnitude(&[
            "preprocess",
            "--input",
            sig.to_str().unwrap(),
            "--freq-hz",
            "500",
            "--band",
            "0.5:50",
            "--resample",
            "250",
            "--segment",
            "2.0",
            "--outdir",
            outdir.to_str().unwrap(),
        ]);
        assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
        let meta: Value = serde_json::from_str(&fs::read_to_string(outdir.join("meta.json")).unwrap()).unwrap();
        assert_eq!(meta["freq_hz"], 250.0);
        assert_eq!(meta["segments"], 3);
        assert_eq!(fs::read_to_string(outdir.join("segment_00000.csv")).unwrap().lines().count(), 500);
    }
    let csv_path = dir.path().join("features.csv");
    let args = [
        "features",
        "--input",
        root.to_str().unwrap(),
        "--n-fourier",
        "8",
        "--n-landmark",
        "4",
        "--seed",
        "3",
        "--output",
        csv_path.to_str().unwrap(),
    ];
    let out = magnitude(&args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = fs::read_to_string(&csv_path).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 7);
    assert!(lines[0].starts_with("label,fourier_0"));
    assert!(lines[1].starts_with("alice,") && lines[6].starts_with("bob,"));
    assert!(lines[1..].iter().all(|l| l.split(',').count() == 13));
    assert!(magnitude(&args).status.success());
    assert_eq!(text, fs::read_to_string(&csv_path).unwrap());
}

#[test]
fn features_need_a_frequency() {
    let dir = tempdir().unwrap();
    fs::write(dir.path().join("a.csv"), "1\n2\n3\n").unwrap();
    let out = magnitude(&["features", "--input", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn convergence_table() {
    let out = magnitude(&[
        "experiment",
        "convergence",
        "--kind",
        "uniform",
        "--sweep",
        "20:0.2,40:0.1",
        "--segments",
        "5",
        "--quiet",
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "kind,f,delta,mean,std,n");
    assert!(lines[1].starts_with("uniform,20,0.2,"));
    assert!(lines[2].ends_with(",5"));
}

#[test]
fn identify_report() {
    let dir = tempdir().unwrap();
    let path = dir.path().join("report.json");
    let out = magnitude(&[
        "experiment",
        "identify",
        "--classes",
        "3",
        "--segments",
        "10",
        "--kind",
        "uniform",
        "--model",
        "logreg",
        "--n-fourier",
        "16",
        "--n-landmark",
        "16",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    let acc = v["report"]["accuracy"].as_f64().unwrap();
    assert!((0.0..=1.0).contains(&acc));
    assert_eq!(v["report"]["n_test"], 6);
    assert_eq!(v["report"]["model"]["model"], "logreg");
    assert!(v["meta"]["derived_seed"].is_u64());
    let single = magnitude(&["experiment", "identify", "--classes", "1", "--segments", "10"]);
    assert_eq!(single.status.code(), Some(1));
}
