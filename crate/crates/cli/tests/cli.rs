use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn modvar(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_modvar")).args(args).current_dir(dir).output().unwrap()
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn csv_integral(path: &Path) -> f64 {
    let text = fs::read_to_string(path).unwrap();
    assert!(text.ends_with('\n'));
    let rows: Vec<(f64, f64)> = text
        .lines()
        .skip(1)
        .map(|l| {
            let (x, d) = l.split_once(',').unwrap();
            (x.parse().unwrap(), d.parse().unwrap())
        })
        .collect();
    let h = (rows[rows.len() - 1].0 - rows[0].0) / (rows.len() - 1) as f64;
    rows.iter().map(|r| r.1).sum::<f64>() * h
}

#[test]
fn gedanken_open_case_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = modvar(&["gedanken", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&dir.path().join("o/gedanken.json"));
    assert_eq!(j["result"]["metrics"]["weak_value_re"], 1.0);
    assert_eq!(j["manifest"]["config"]["n_particles"], 100);
    let header = fs::read_to_string(dir.path().join("o/gedanken.csv")).unwrap();
    assert!(header.starts_with("p_q,density\n"));
}

#[test]
fn gedanken_closed_case_passes() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "experiment = \"gedanken\"\n[config]\nslit_open = false\n").unwrap();
    let out = modvar(&["gedanken", "--manifest", "m.toml", "--out", "."], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let j = json(&dir.path().join("gedanken.json"));
    assert!(j["result"]["metrics"]["weak_value_re"].as_f64().unwrap().abs() < 1e-12);
}

#[test]
fn unknown_key_exits_two_naming_it() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "[config]\nlamda = 0.2\n").unwrap();
    let out = modvar(&["gedanken", "--manifest", "m.toml", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("lamda"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn same_manifest_same_bytes() {
    let dir = tempfile::tempdir().unwrap();
    let manifest = "experiment = \"gedanken\"\nseed = 42\n[config]\nmode = \"monte-carlo\"\nslit_open = false\nn_particles = 10\n";
    fs::write(dir.path().join("m.toml"), manifest).unwrap();
    for (sub, threads) in [("a", "1"), ("b", "1"), ("c", "4")] {
        let out = modvar(&["gedanken", "--manifest", "m.toml", "--out", sub, "--threads", threads], dir.path());
        assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    }
    for file in ["gedanken.json", "gedanken.csv"] {
        let a = fs::read(dir.path().join("a").join(file)).unwrap();
        assert_eq!(a, fs::read(dir.path().join("b").join(file)).unwrap(), "{file}");
        assert_eq!(a, fs::read(dir.path().join("c").join(file)).unwrap(), "{file}");
    }
}

#[test]
fn csv_densities_integrate_to_one() {
    let dir = tempfile::tempdir().unwrap();
    for cmd in ["gedanken", "grating", "flatness"] {
        let out = modvar(&[cmd, "--out", "o", "--format", "csv"], dir.path());
        assert_eq!(out.status.code(), Some(0));
        let total = csv_integral(&dir.path().join(format!("o/{cmd}.csv")));
        assert!((total - 1.0).abs() < 1e-9, "{cmd}: {total}");
        assert!(!dir.path().join(format!("o/{cmd}.json")).exists());
    }
    let text = fs::read_to_string(dir.path().join("o/grating.csv")).unwrap();
    assert!(text.starts_with("theta,density\n"));
}

#[test]
fn stability_guard_writes_nothing() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "[config]\ndt = 0.5\n").unwrap();
    let out = modvar(&["theorem1", "--manifest", "m.toml", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("stability"));
    assert!(!dir.path().join("o").exists());
}

#[test]
fn failing_verdict_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "[tolerances]\nweak_value_exact = 0.0\n").unwrap();
    let out = modvar(&["gedanken", "--manifest", "m.toml", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(1));
    let j = json(&dir.path().join("o/gedanken.json"));
    let v = &j["result"]["verdicts"][0];
    assert_eq!(v["name"], "weak_value_exact");
    assert_eq!(v["pass"], false);
}

#[test]
fn override_for_missing_verdict_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "[tolerances]\nno_such_check = 1.0\n").unwrap();
    let out = modvar(&["zn", "--manifest", "m.toml", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn seed_flag_overrides_manifest() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("m.toml"), "seed = 5\n[config]\nn_photons = 1000\n").unwrap();
    let out = modvar(&["mz", "--manifest", "m.toml", "--seed", "9", "--out", "o", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let j = json(&dir.path().join("o/mz.json"));
    assert_eq!(j["manifest"]["seed"], 9);
    assert_eq!(j["result"]["provenance"]["seed"], 9);
}

#[test]
fn suite_passes() {
    let dir = tempfile::tempdir().unwrap();
    let out = modvar(&["suite", "--out", "o", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
    let j = json(&dir.path().join("o/suite.json"));
    let verdicts = j["result"]["verdicts"].as_array().unwrap();
    for i in 1..=12 {
        let prefix = format!("c{i:02}_");
        assert!(verdicts.iter().any(|v| v["name"].as_str().unwrap().starts_with(&prefix)), "criterion {i}");
    }
}
