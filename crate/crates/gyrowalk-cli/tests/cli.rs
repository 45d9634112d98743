//! End-to-end CLI tests: golden trajectory output, byte determinism,
//! exit codes, config-file precedence, and rendering.

use std::path::Path;
use std::process::{Command, Output};

fn gyrowalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gyrowalk"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn read(path: &Path) -> Vec<u8> {
    std::fs::read(path).expect("output file exists")
}

/// Golden-file pin of the CSV schema and float formatting at n=100, seed=42.
#[test]
fn golden_simulate_u() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let status = gyrowalk(&[
        "simulate-u",
        "--law",
        "uniform",
        "--steps",
        "100",
        "--seed",
        "42",
        "--stride",
        "10",
        "--varsigma0",
        "0.3",
        "--tau0",
        "0.0",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let expected = include_bytes!("golden/simulate_u_n100_seed42.csv");
    assert_eq!(read(&out), expected, "CSV output drifted from the golden file");
}

/// Identical (argv, seed) invocations produce byte-identical CSV and SVG.
#[test]
fn deterministic_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv_a = dir.path().join("a.csv");
    let csv_b = dir.path().join("b.csv");
    for out in [&csv_a, &csv_b] {
        let status = gyrowalk(&[
            "simulate-z",
            "--p",
            "0.5",
            "--law",
            "uniform",
            "--steps",
            "5000",
            "--seed",
            "1",
            "--stride",
            "25",
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(status.status.success());
    }
    assert_eq!(read(&csv_a), read(&csv_b));

    let svg_a = dir.path().join("a.svg");
    let svg_b = dir.path().join("b.svg");
    for (input, svg) in [(&csv_a, &svg_a), (&csv_b, &svg_b)] {
        let status = gyrowalk(&[
            "render",
            "--input",
            input.to_str().unwrap(),
            "--out",
            svg.to_str().unwrap(),
        ]);
        assert!(status.status.success());
    }
    let bytes = read(&svg_a);
    assert_eq!(bytes, read(&svg_b));
    assert!(bytes.starts_with(b"<svg"));
}

#[test]
fn simulate_z_row_count_matches_stride() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.csv");
    let status = gyrowalk(&[
        "simulate-z",
        "--p",
        "0.5",
        "--law",
        "uniform",
        "--steps",
        "3000",
        "--seed",
        "1",
        "--stride",
        "10",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let text = String::from_utf8(read(&out)).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "traj,n,omega,varsigma,tau,x,y,saturated,busemann_plus,busemann_minus,dist_p"
    );
    assert_eq!(lines.count(), 300);
}

#[test]
fn exit_codes() {
    // unknown flag -> usage, exit 1
    let out = gyrowalk(&["simulate-u", "--does-not-exist"]);
    assert_eq!(out.status.code(), Some(1));

    // missing required seed -> exit 1
    let out = gyrowalk(&["simulate-u", "--law", "uniform", "--steps", "10", "--out", "/tmp/x.csv"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("seed"));

    // analysis precondition violation -> exit 1
    let out = gyrowalk(&[
        "clt",
        "--law",
        "paper-triangular",
        "--steps",
        "1000",
        "--replicas",
        "100",
        "--seed",
        "1",
    ]);
    assert_eq!(out.status.code(), Some(1));

    // verify passes -> exit 0 with a summary
    let out = gyrowalk(&["verify", "--trials", "25", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("PASS"));
    assert!(text.contains("tau-shift"));

    // help goes through the usual clap path, exit 0
    let out = gyrowalk(&["--help"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn verify_json_reports_checks() {
    let out = gyrowalk(&["verify", "--trials", "10", "--seed", "3", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["passed"], serde_json::json!(true));
    assert_eq!(v["trials"], serde_json::json!(10));
    assert!(v["checks"].as_array().unwrap().len() >= 10);
}

/// Flags override the config file; unknown config keys are rejected.
#[test]
fn config_file_precedence() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    let out_cfg = dir.path().join("from_config.csv");
    std::fs::write(
        &cfg,
        format!(
            r#"{{"law":"uniform","steps":50,"seed":9,"stride":10,"varsigma0":"0.1","out":"{}"}}"#,
            out_cfg.display()
        ),
    )
    .unwrap();

    // everything from the config
    let out = gyrowalk(&["simulate-u", "--config", cfg.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out_cfg.exists());

    // flag beats config: steps 20 -> 2 data rows at stride 10
    let out_flag = dir.path().join("flag_wins.csv");
    let out = gyrowalk(&[
        "simulate-u",
        "--config",
        cfg.to_str().unwrap(),
        "--steps",
        "20",
        "--out",
        out_flag.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let rows = String::from_utf8(read(&out_flag)).unwrap().lines().count() - 1;
    assert_eq!(rows, 2);

    // unknown key -> exit 1
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"law":"uniform","certainly_not_a_key":1}"#).unwrap();
    let out = gyrowalk(&[
        "simulate-u",
        "--config",
        bad.to_str().unwrap(),
        "--steps",
        "10",
        "--seed",
        "1",
        "--out",
        dir.path().join("never.csv").to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("certainly_not_a_key"));
}

#[test]
fn tabulated_law_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let knots = dir.path().join("knots.json");
    std::fs::write(&knots, "[[0.0,-0.8],[0.5,0.0],[1.0,0.8]]").unwrap();
    let out = dir.path().join("traj.csv");
    let status = gyrowalk(&[
        "simulate-u",
        "--law",
        &format!("table:{}", knots.display()),
        "--steps",
        "200",
        "--seed",
        "2",
        "--stride",
        "50",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success(), "{}", String::from_utf8_lossy(&status.stderr));
    assert_eq!(String::from_utf8(read(&out)).unwrap().lines().count(), 5);

    // malformed table -> exit 1
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[0.5,0.0],[1.0,0.8]]").unwrap();
    let status = gyrowalk(&[
        "simulate-u",
        "--law",
        &format!("table:{}", bad.display()),
        "--steps",
        "10",
        "--seed",
        "1",
        "--out",
        dir.path().join("never.csv").to_str().unwrap(),
    ]);
    assert_eq!(status.status.code(), Some(1));
}

#[test]
fn rates_reports_expected_rate_from_quadrature() {
    let out = gyrowalk(&[
        "rates",
        "--law",
        "paper-triangular",
        "--steps",
        "20000",
        "--seed",
        "3",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let expected = v["expected_rate"].as_f64().unwrap();
    assert!((expected - 0.0773651888).abs() < 1e-6);
    assert!(v["quadrature_error_bound"].as_f64().unwrap() < 1e-6);
    assert_eq!(v["epsilon_x"], serde_json::json!(1));
}

#[test]
fn jsonl_format_roundtrips_through_render() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("traj.jsonl");
    let status = gyrowalk(&[
        "simulate-z",
        "--p",
        "0.9",
        "--law",
        "paper-triangular",
        "--steps",
        "2000",
        "--seed",
        "4",
        "--stride",
        "20",
        "--out",
        out.to_str().unwrap(),
    ]);
    assert!(status.status.success());
    let first = String::from_utf8(read(&out))
        .unwrap()
        .lines()
        .next()
        .unwrap()
        .to_string();
    assert!(first.starts_with("{\"traj\":0,\"n\":20,"));

    let svg = dir.path().join("cloud.svg");
    let status = gyrowalk(&[
        "render",
        "--input",
        out.to_str().unwrap(),
        "--out",
        svg.to_str().unwrap(),
        "--title",
        "two-pencil walk",
    ]);
    assert!(status.status.success());
    assert!(String::from_utf8(read(&svg)).unwrap().contains("two-pencil walk"));
}
