use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_mdmetric"))
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let p = dir.path().join(name);
    fs::write(&p, body).unwrap();
    p
}

fn run(domain: Option<&Path>, args: &[&str]) -> Output {
    let mut cmd = bin();
    if let Some(d) = domain {
        cmd.arg("--domain").arg(d);
    }
    cmd.args(args).output().unwrap()
}

fn stdout_json(out: &Output) -> serde_json::Value {
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

/// Radius where `diff` changes sign, by linear interpolation between rows.
fn sign_changes(csv: &str) -> Vec<f64> {
    let rows: Vec<(f64, f64)> = csv
        .lines()
        .skip(1)
        .map(|l| {
            let c: Vec<f64> = l.split(',').map(|v| v.parse().unwrap()).collect();
            (c[0], c[3])
        })
        .collect();
    rows.windows(2)
        .filter(|w| (w[0].1 > 0.0) != (w[1].1 > 0.0))
        .map(|w| w[0].0 + (w[1].0 - w[0].0) * w[0].1 / (w[0].1 - w[1].1))
        .collect()
}

#[test]
fn disk_distance_matches_log_three() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", r#"{"preset": "ball", "center": [0, 0], "radius": 1}"#);
    let v = stdout_json(&run(Some(&disk), &["distance", "--from", "0,0", "--to", "0.5,0"]));
    assert!((v["distance"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-3, "{v}");
    let v = stdout_json(&run(Some(&disk), &["distance", "--from", "0.2,0.1", "--to", "0.2,0.1"]));
    assert_eq!(v["distance"].as_f64(), Some(0.0));
}

#[test]
fn punctured_plane_half_turn_is_pi() {
    let dir = TempDir::new().unwrap();
    let plane = write(&dir, "plane.json", r#"{"preset": "punctured_plane"}"#);
    let v = stdout_json(&run(Some(&plane), &["distance", "--from", "1,0", "--to", "-1,0"]));
    assert!((v["distance"].as_f64().unwrap() - std::f64::consts::PI).abs() < 1e-2, "{v}");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", r#"{"preset": "ball"}"#);
    let broken = write(&dir, "broken.json", r#"{"preset": "ball", "radius": }"#);
    let bad_preset = write(&dir, "bad.json", r#"{"preset": "torus"}"#);

    let outside = run(Some(&disk), &["distance", "--from", "0,0", "--to", "2,0"]);
    assert_eq!(outside.status.code(), Some(3));
    assert_eq!(run(Some(&broken), &["density"]).status.code(), Some(2));
    assert_eq!(run(Some(&bad_preset), &["density"]).status.code(), Some(2));
    assert_eq!(run(None, &["density"]).status.code(), Some(2));
    assert_eq!(run(Some(&disk), &["--kind", "q", "density"]).status.code(), Some(2));

    let unknown = run(None, &["report", "nonsense"]);
    assert_eq!(unknown.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("usage"));
}

#[test]
fn crossover_report_passes() {
    let v = stdout_json(&run(None, &["report", "crossover"]));
    assert_eq!(v["pass"], true);
    let alpha = v["alpha"].as_f64().unwrap();
    assert!(alpha > 0.4638 && alpha < 0.4640, "{v}");
    assert!((v["beta_R10"].as_f64().unwrap() - 4.48).abs() < 0.01, "{v}");
}

#[test]
fn profiles_cross_at_the_reported_radii() {
    let dir = TempDir::new().unwrap();
    let pd = write(&dir, "pd.json", r#"{"preset": "punctured_disk", "radius": 1}"#);
    let out = run(Some(&pd), &["density", "--profile", "1000"]);
    assert!(out.status.success());
    let csv = String::from_utf8(out.stdout).unwrap();
    assert!(csv.starts_with("r,m_density,h_density,diff\n"));
    assert_eq!(csv.lines().count(), 1001);
    let roots = sign_changes(&csv);
    assert_eq!(roots.len(), 1, "{roots:?}");
    let alpha = stdout_json(&run(None, &["crossover"]))["alpha"].as_f64().unwrap();
    assert!((roots[0] - alpha).abs() < 1e-3, "{roots:?} vs {alpha}");

    let ann = write(&dir, "ann.json", r#"{"preset": "annulus", "inner": 0.1, "outer": 10}"#);
    let out = run(Some(&ann), &["density", "--profile", "1000"]);
    let roots = sign_changes(&String::from_utf8(out.stdout).unwrap());
    assert_eq!(roots.len(), 1, "{roots:?}");
    assert!((roots[0] - 4.48).abs() < 0.01, "{roots:?}");
}

#[test]
fn empty_point_list_gives_header_only() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", r#"{"preset": "ball"}"#);
    let pts = write(&dir, "pts.json", "[]");
    let out = run(Some(&disk), &["density", "--points", pts.to_str().unwrap()]);
    assert!(out.status.success());
    assert_eq!(out.stdout, b"x,y,value\n");

    let pts = write(&dir, "pts2.json", "[[0.5, 0.0], [0.0, -0.25]]");
    let out = run(Some(&disk), &["density", "--points", pts.to_str().unwrap()]);
    let text = String::from_utf8(out.stdout).unwrap();
    let first: Vec<&str> = text.lines().nth(1).unwrap().split(',').collect();
    // 17 significant digits, and m = 2/(1 − r²) in the unit disk
    assert_eq!(first[0], "5.0000000000000000e-1");
    assert!((first[2].parse::<f64>().unwrap() - 2.0 / 0.75).abs() < 1e-14);
}

#[test]
fn curvature_map_header_and_values() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", r#"{"preset": "ball", "radius": 2}"#);
    let out = run(Some(&disk), &["--grid", "8", "curvature-map"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,K,kind,h"));
    let mut rows = 0;
    for l in lines {
        let c: Vec<&str> = l.split(',').collect();
        assert_eq!(c[3], "m");
        assert!((c[2].parse::<f64>().unwrap() + 1.0).abs() < 1e-3, "{l}");
        rows += 1;
    }
    assert!(rows > 20);
}

#[test]
fn perimeter_and_loop_commands() {
    let dir = TempDir::new().unwrap();
    let pd = write(&dir, "pd.json", r#"{"preset": "punctured_disk"}"#);
    let v = stdout_json(&run(Some(&pd), &["perimeter", "--radius", "0.5"]));
    let expect = 8.0 * std::f64::consts::PI / 3.0;
    assert!((v["length"].as_f64().unwrap() - expect).abs() < 1e-6, "{v}");
    assert!((v["closed_form"].as_f64().unwrap() - expect).abs() < 1e-12, "{v}");

    let v = stdout_json(&run(Some(&pd), &["loop"]));
    let len = v["length"].as_f64().unwrap();
    let tau = std::f64::consts::TAU;
    assert!((tau - 1e-6..=tau + 0.005).contains(&len), "{len}");
}

#[test]
fn length_of_a_polyline() {
    let dir = TempDir::new().unwrap();
    let disk = write(&dir, "disk.json", r#"{"preset": "ball"}"#);
    let path = write(&dir, "path.json", r#"{"closed": false, "vertices": [[0, 0], [0.5, 0]]}"#);
    let v = stdout_json(&run(Some(&disk), &["length", "--path", path.to_str().unwrap()]));
    assert!((v["length"].as_f64().unwrap() - 3f64.ln()).abs() < 1e-9, "{v}");
    let outside = write(&dir, "out.json", r#"{"closed": false, "vertices": [[0, 0], [1.5, 0]]}"#);
    assert_eq!(run(Some(&disk), &["length", "--path", outside.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn output_files_are_reproducible_and_atomic() {
    let dir = TempDir::new().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for out in [&a, &b] {
        let s = bin()
            .args(["--seed", "42", "--out", out.to_str().unwrap(), "report", "monotonicity"])
            .status()
            .unwrap();
        assert!(s.success());
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());

    // a failing run leaves no file behind
    let disk = write(&dir, "disk.json", r#"{"preset": "ball"}"#);
    let pts = write(&dir, "pts.json", "[[0.1, 0.1], [3.0, 0.0]]");
    let target = dir.path().join("never.csv");
    let out = bin()
        .arg("--domain")
        .arg(&disk)
        .args(["--out", target.to_str().unwrap(), "density", "--points", pts.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(!target.exists());
    assert_eq!(fs::read_dir(dir.path()).unwrap().count(), 4);
}
