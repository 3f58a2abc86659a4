use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn rcsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rcsim")).args(args).output().expect("binary runs")
}

fn write_config(dir: &Path, body: &str) -> PathBuf {
    let p = dir.join("config.json");
    fs::write(&p, body).unwrap();
    p
}

fn run_ok(args: &[&str]) -> Value {
    let out = rcsim(args);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn tree(dir: &Path) -> Vec<(String, Vec<u8>)> {
    let mut files = Vec::new();
    let mut stack = vec![dir.to_path_buf()];
    while let Some(d) = stack.pop() {
        for e in fs::read_dir(&d).unwrap() {
            let p = e.unwrap().path();
            if p.is_dir() {
                stack.push(p);
            } else {
                files.push((p.strip_prefix(dir).unwrap().display().to_string(), fs::read(&p).unwrap()));
            }
        }
    }
    files.sort();
    files
}

#[test]
fn sample_is_byte_identical_across_runs() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 17, "window": {"side": 3}, "activity": {"z": 1}, "sweeps": 30, "replicas": 5}"#,
    );
    let cfg = cfg.to_str().unwrap();
    let a = tmp.path().join("a");
    let b = tmp.path().join("b");
    run_ok(&["sample", "--config", cfg, "--out", a.to_str().unwrap()]);
    run_ok(&["sample", "--config", cfg, "--out", b.to_str().unwrap(), "--jobs", "2"]);
    let (ta, tb) = (tree(&a), tree(&b));
    assert_eq!(ta.len(), 11);
    assert_eq!(ta, tb);
    let csv = String::from_utf8(ta.iter().find(|f| f.0.ends_with("000000.csv")).unwrap().1.clone()).unwrap();
    assert!(csv.starts_with("species,x1,x2\n"));
    let meta: Value = serde_json::from_slice(&ta.iter().find(|f| f.0.ends_with("000000.json")).unwrap().1).unwrap();
    assert_eq!(meta["seed"], 17);
    assert_eq!(meta["sweeps"], 30);
}

#[test]
fn tiny_activity_gives_empty_dumps() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 1, "activity": {"z": 0.01}, "sweeps": 100, "replicas": 200}"#,
    );
    let s = run_ok(&["sample", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    // Both final draws empty with probability exp(-0.02) ~ 0.98.
    let mean = s["density_total"]["mean"].as_f64().unwrap();
    assert!(mean < 0.1, "{mean}");
    let empty = fs::read_dir(tmp.path().join("o/samples"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| p.extension().is_some_and(|x| x == "csv"))
        .filter(|p| fs::read_to_string(p).unwrap().lines().count() == 1)
        .count();
    assert!(empty >= 185, "{empty}");
}

#[test]
fn free_boundary_densities_agree() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 5, "window": {"side": 3}, "activity": {"z": 1}, "sweeps": 40, "replicas": 10000, "write_samples": false}"#,
    );
    let s = run_ok(&["sample", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    let (p, sp) = (s["density_plus"]["mean"].as_f64().unwrap(), s["density_plus"]["std_error"].as_f64().unwrap());
    let (m, sm) = (s["density_minus"]["mean"].as_f64().unwrap(), s["density_minus"]["std_error"].as_f64().unwrap());
    assert!(sp > 0.0 && sm > 0.0);
    assert!((p - m).abs() < 3.0 * (sp * sp + sm * sm).sqrt(), "{p} {m}");
}

#[test]
fn cftp_writes_samples_and_replays() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 9, "window": {"side": 0.7}, "activity": {"z": 1}, "replicas": 20}"#,
    );
    let cfg = cfg.to_str().unwrap();
    let a = tmp.path().join("a");
    let s = run_ok(&["cftp", "--config", cfg, "--out", a.to_str().unwrap()]);
    assert!(s["coalescence"]["median"].as_u64().unwrap() <= 8);
    let times = fs::read_to_string(a.join("coalescence.csv")).unwrap();
    assert_eq!(times.lines().count(), 21);
    let meta: Value = serde_json::from_str(&fs::read_to_string(a.join("samples/sample_000003.json")).unwrap()).unwrap();
    assert!(meta["N_K"].as_i64().unwrap() < 0);
    let b = tmp.path().join("b");
    run_ok(&["cftp", "--config", cfg, "--out", b.to_str().unwrap()]);
    assert_eq!(tree(&a), tree(&b));
    let c = tmp.path().join("c");
    run_ok(&["cftp", "--config", cfg, "--out", c.to_str().unwrap(), "--seed", "10"]);
    assert_ne!(tree(&a), tree(&c));
}

#[test]
fn plus_boundary_reports_boundary_connection() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 2, "window": {"side": 3}, "activity": {"z": 1},
            "boundary": {"kind": "plus_poisson", "z": 1}, "replicas": 200, "write_samples": false}"#,
    );
    let s = run_ok(&["cftp", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert!(s["species_difference"]["mean"].as_f64().unwrap() > 0.0);
    assert!(s["percolation_fraction"]["mean"].as_f64().unwrap() > 0.0);
    assert!(s["boundary_connected_density"]["std_error"].as_f64().unwrap() > 0.0);
}

#[test]
fn non_coalescence_exits_with_4() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 3, "window": {"side": 6}, "activity": {"z": 3}, "schedule": [-1], "replicas": 3}"#,
    );
    let out = rcsim(&["cftp", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("did not coalesce"));
    let s: Value = serde_json::from_str(&fs::read_to_string(tmp.path().join("o/summary.json")).unwrap()).unwrap();
    assert_eq!(s["non_coalesced"].as_array().unwrap().len(), 3);
}

#[test]
fn config_errors_exit_with_2_and_name_the_field() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), r#"{"seed": 1, "activity": {"z": "big"}}"#);
    let out = rcsim(&["sample", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("activity.z"));

    let out = rcsim(&["sample", "--config", cfg.to_str().unwrap(), "--set", "activity.z=-1"]);
    assert_eq!(out.status.code(), Some(2));

    let cfg = write_config(tmp.path(), r#"{"seed": 1, "sweep": {"parameter": "z", "values": [2.0]}}"#);
    let out = rcsim(&["sweep", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("sweep.values"));

    let out = rcsim(&["sample"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn z_sweep_is_increasing() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 4, "window": {"side": 3}, "replicas": 3000,
            "sweep": {"parameter": "z", "values": [0.5, 1, 2, 4]}}"#,
    );
    let r = run_ok(&["sweep", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    let rows = r["rows"].as_array().unwrap();
    for w in rows.windows(2) {
        let (a, sa) = (w[0]["estimate"].as_f64().unwrap(), w[0]["stderr"].as_f64().unwrap());
        let (b, sb) = (w[1]["estimate"].as_f64().unwrap(), w[1]["stderr"].as_f64().unwrap());
        assert!(b - a > 3.0 * (sa * sa + sb * sb).sqrt(), "{a} {b}");
    }
    let csv = fs::read_to_string(tmp.path().join("o/sweep.csv")).unwrap();
    assert!(csv.starts_with("z,estimate,stderr\n0.5,"));
    assert_eq!(csv.lines().count(), 5);
}

#[test]
fn bond_sweep_is_coupled_monotone() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 4,
            "percolation": {"model": "lattice", "p_s": 0.9, "p_b": 0.5, "half_width": 8, "trials": 500},
            "sweep": {"parameter": "p_b", "values": [0.2, 0.5, 0.8]}}"#,
    );
    let r = run_ok(&["sweep", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(r["coupled_monotone"], true);
    let est: Vec<f64> = r["rows"].as_array().unwrap().iter().map(|x| x["estimate"].as_f64().unwrap()).collect();
    assert!(est[0] <= est[1] && est[1] <= est[2]);
}

#[test]
fn validate_passes_and_negative_control_fails() {
    let tmp = TempDir::new().unwrap();
    let report = run_ok(&["validate", "--out", tmp.path().join("a").to_str().unwrap()]);
    assert_eq!(report["pass"], true);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .filter(|c| c["kind"] == "identity")
        .all(|c| c["value"].as_f64().unwrap() <= 1e-12));
    assert_eq!(checks.iter().filter(|c| c["kind"] == "chi_square").count(), 4);

    let out = rcsim(&["validate", "--inject-wrong-p", "--set", "validate.samples=0", "--out", tmp.path().join("b").to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["pass"], false);
}

#[test]
fn percolation_command_reports_estimate() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(
        tmp.path(),
        r#"{"seed": 8, "window": {"side": 10}, "subwindow": {"lower": [1, 1], "upper": [9, 9]},
            "percolation": {"model": "continuum", "z": 1, "rule": {"kind": "boolean", "r": 0.089}, "trials": 500}}"#,
    );
    let r = run_ok(&["percolation", "--config", cfg.to_str().unwrap(), "--out", tmp.path().join("o").to_str().unwrap()]);
    assert_eq!(r["model"], "continuum");
    assert!(r["estimate"].as_f64().unwrap() < 0.01);
    assert!(tmp.path().join("o/percolation.json").exists());
}
