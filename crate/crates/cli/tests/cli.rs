use std::collections::HashMap;
use std::path::Path;
use std::process::{Command, Output};

use cartan_metrology::noise::NoiseScan;
use cartan_metrology::sampling::read_scan_csv;
use cartan_metrology::{canonicalize, CartanParams};
use serde_json::Value;

fn cartan(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(args)
        .env_remove("CARTAN_THREADS")
        .output()
        .expect("binary runs")
}

fn ok_json(args: &[&str]) -> Value {
    let out = cartan(args);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn f(v: &Value) -> f64 {
    v.as_f64().unwrap_or_else(|| panic!("not a number: {v}"))
}

#[test]
fn qfim_optimal_bell_state() {
    let v = ok_json(&["qfim", "--state-bell", "0.5,0.5,0.5,0.5"]);
    assert!((f(&v["p"]) - 0.75).abs() < 1e-9);
    assert!((f(&v["inv_s"]) - 64.0).abs() < 1e-9);
    assert_eq!(v["singular"], Value::Bool(false));
    assert_eq!(v["schema_version"], 1);
    assert!(v["version"].is_string());
}

#[test]
fn qfim_singular_state_reports_inf() {
    let v = ok_json(&["qfim", "--state-canonical", "1,0,0,0"]);
    assert_eq!(v["p"], "inf");
    assert_eq!(v["singular"], Value::Bool(true));
}

#[test]
fn qfim_with_noise_uses_mixed_route() {
    let v = ok_json(&[
        "qfim",
        "--state-canonical",
        "0.7071067811865476,0.7071067811865476,0,0",
        "--family",
        "bitflip",
        "--gamma",
        "1",
        "--lambda",
        "0.3,pi/8,-0.1",
    ]);
    assert_eq!(v["route"], "mixed");
    assert!((f(&v["p"]) - 0.75).abs() < 1e-8);
}

#[test]
fn frontier_at_minimum() {
    let v = ok_json(&["frontier", "--p", "0.75"]);
    assert!((f(&v["points"][0]["inv_s"]) - 64.0).abs() < 1e-12);
}

#[test]
fn canonicalize_reaches_domain_and_logs_moves() {
    let v = ok_json(&["canonicalize", "--lambda", "1.0,-0.2,0.1"]);
    let c: Vec<f64> = v["canonical"].as_array().unwrap().iter().map(f).collect();
    let (want, moves) = canonicalize(&CartanParams::new(1.0, -0.2, 0.1)).unwrap();
    assert!(CartanParams::new(c[0], c[1], c[2]).in_canonical_domain());
    assert!(CartanParams::new(c[0], c[1], c[2]).max_abs_diff(&want) < 1e-15);
    assert_eq!(v["moves"].as_array().unwrap().len(), moves.len());
}

#[test]
fn optimal_spec_and_rx() {
    let v = ok_json(&[
        "optimal",
        "--spec",
        r#"{"family":"entangled","alpha":0.3,"beta":0.2}"#,
    ]);
    assert!((f(&v["p"]) - 0.75).abs() < 1e-9);
    let v = ok_json(&["optimal", "--rx", "pi/2,0.3"]);
    assert!((f(&v["inv_s"]) - 64.0).abs() < 1e-9);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("spec.json");
    std::fs::write(&path, r#"{"family":"suboptimal","p":2.0,"position":3}"#).unwrap();
    let v = ok_json(&["optimal", "--spec", &format!("@{}", path.display())]);
    assert!((f(&v["p"]) - 2.0).abs() < 1e-8);
}

#[test]
fn domain_errors_exit_2_with_one_line() {
    for args in [
        &["qfim", "--state-bell", "0.6,0.5,0.5,0.5"][..],
        &["frontier", "--p", "0.5"],
        &[
            "noise-scan",
            "--class",
            "psi1",
            "--family",
            "bitflip",
            "--scope",
            "single",
            "--gamma-grid",
            "1",
        ],
        &[
            "qfim",
            "--state-canonical",
            "0.5,0.5,0.5,0.5",
            "--family",
            "bitflip",
            "--gamma",
            "1.5",
        ],
        &[
            "optimal",
            "--spec",
            r#"{"family":"entangled","alpha":0.9,"beta":0.2}"#,
        ],
        &["sample", "--n", "0"],
        &["canonicalize", "--lambda", "1,2"],
        &["qfim", "--state-bell", "0.5,0.5,0.5", "--format", "svg"],
    ] {
        let out = cartan(args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        let err = String::from_utf8_lossy(&out.stderr);
        assert_eq!(err.trim_end().lines().count(), 1, "{args:?}: {err}");
        assert!(err.starts_with("error: "));
    }
}

#[test]
fn unknown_flag_rejected() {
    let out = cartan(&["sample", "--n", "10", "--bogus"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
}

#[test]
fn sample_seed_determines_bytes() {
    let run = |seed: &str, threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_cartan"))
            .args(["sample", "--n", "3000", "--seed", seed])
            .env("CARTAN_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    let a = run("17", "1");
    assert_eq!(a, run("17", "4"));
    assert_ne!(a, run("18", "1"));
}

#[test]
fn bad_thread_count_rejected() {
    let out = Command::new(env!("CARGO_BIN_EXE_cartan"))
        .args(["frontier", "--p", "1"])
        .env("CARTAN_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn sample_csv_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let p = path.to_str().unwrap();
    let out = cartan(&[
        "sample",
        "--n",
        "500",
        "--seed",
        "3",
        "--kind",
        "factorizable",
        "--out",
        p,
    ]);
    assert!(out.status.success());
    let text = std::fs::read_to_string(&path).unwrap();
    assert!(!text.contains('\r'));
    let (meta, records) = read_scan_csv(text.as_bytes()).unwrap();
    assert_eq!(meta.get("seed"), Some("3"));
    assert!(meta.get("version").is_some());
    assert_eq!(records.len(), 500);
    // rewriting through the library reproduces the file byte for byte
    let mut buf = Vec::new();
    cartan_metrology::sampling::write_scan_csv(&mut buf, &meta, &records).unwrap();
    assert_eq!(buf, text.as_bytes());
}

#[test]
fn noise_csv_round_trip_with_inf() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("n.csv");
    let p = path.to_str().unwrap();
    let out = cartan(&[
        "noise-scan",
        "--class",
        "psi2",
        "--family",
        "bitflip",
        "--scope",
        "both",
        "--gamma-grid",
        "5",
        "--phi-grid",
        "4",
        "--lambda",
        "0.1,0.2,0.3",
        "--out",
        p,
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let text = std::fs::read_to_string(&path).unwrap();
    let scan = NoiseScan::read_csv(text.as_bytes()).unwrap();
    assert_eq!(scan.p.len(), 5);
    assert!(
        text.contains(",inf\n"),
        "two-flip channel at γ = 1/2 should diverge"
    );
    let mut buf = Vec::new();
    let mut meta = scan.metadata();
    meta.entries.push(("seed".into(), "none".into()));
    meta.entries
        .push(("version".into(), env!("CARGO_PKG_VERSION").into()));
    scan.write_csv(&meta, &mut buf).unwrap();
    assert_eq!(buf, text.as_bytes());
}

/// Fill colour of every heatmap cell, keyed by `(ix, iy)`.
fn cells(svg: &str) -> HashMap<(usize, usize), String> {
    let attr = |line: &str, name: &str| -> String {
        let start = line.find(&format!("{name}=\"")).unwrap() + name.len() + 2;
        line[start..].split('"').next().unwrap().to_string()
    };
    svg.lines()
        .filter(|l| l.contains("data-ix"))
        .map(|l| {
            (
                (
                    attr(l, "data-ix").parse().unwrap(),
                    attr(l, "data-iy").parse().unwrap(),
                ),
                attr(l, "fill"),
            )
        })
        .collect()
}

fn svg_of(args: &[&str], path: &Path) -> String {
    let mut all = args.to_vec();
    let p = path.to_str().unwrap();
    all.extend(["--format", "svg", "--out", p]);
    let out = cartan(&all);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    std::fs::read_to_string(path).unwrap()
}

#[test]
fn noise_heatmap_mirror_symmetric() {
    let dir = tempfile::tempdir().unwrap();
    let svg = svg_of(
        &[
            "noise-scan",
            "--class",
            "psi1",
            "--family",
            "bitflip",
            "--scope",
            "single",
        ],
        &dir.path().join("n.svg"),
    );
    let c = cells(&svg);
    assert_eq!(c.len(), 101 * 64);
    for ((ix, iy), fill) in &c {
        assert_eq!(fill, &c[&(100 - ix, *iy)], "cell ({ix}, {iy})");
    }
}

#[test]
fn heatmaps_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "sample",
        "--n",
        "2000",
        "--seed",
        "5",
        "--map",
        "concurrence",
    ];
    let a = svg_of(&args, &dir.path().join("a.svg"));
    let b = svg_of(&args, &dir.path().join("b.svg"));
    assert_eq!(a, b);
    assert!(a.starts_with("<?xml") && a.trim_end().ends_with("</svg>"));
    assert!(a.contains("<!-- seed=5 -->"));
}

#[test]
fn single_record_heatmap() {
    let dir = tempfile::tempdir().unwrap();
    let svg = svg_of(
        &["sample", "--n", "1", "--kind", "optimal"],
        &dir.path().join("one.svg"),
    );
    assert_eq!(cells(&svg).len(), 1);
}

#[test]
fn density_heatmap_stays_in_window() {
    let dir = tempfile::tempdir().unwrap();
    let svg = svg_of(
        &["sample", "--n", "10000", "--seed", "2"],
        &dir.path().join("d.svg"),
    );
    let c = cells(&svg);
    assert!(!c.is_empty());
    assert!(c.keys().all(|&(ix, iy)| ix < 256 && iy < 256));
}
