use std::path::{Path, PathBuf};
use std::process::Command;

const BIN: &str = env!("CARGO_BIN_EXE_nonlocal-spectra");

fn configs() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../configs")
}

fn run(cmd: &str, config: &Path, out: &Path) -> i32 {
    let status = Command::new(BIN)
        .args([cmd, "--config"])
        .arg(config)
        .arg("--out")
        .arg(out)
        .env_remove("NONLOCAL_SPECTRA_THREADS")
        .output()
        .expect("binary runs");
    status.status.code().expect("exit code")
}

fn write_config(dir: &Path, name: &str, body: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p
}

#[test]
fn embedded_plateaus_are_listed() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(
            "spectrum",
            &configs().join("embedded_spectrum.json"),
            tmp.path()
        ),
        0
    );
    let csv = std::fs::read_to_string(tmp.path().join("plateaus.csv")).unwrap();
    let lambdas: Vec<f64> = csv
        .lines()
        .skip(2)
        .map(|l| l.split(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(lambdas.len(), 2);
    assert!((lambdas[0] + 0.6 * 1.5).abs() < 1e-12);
    assert!((lambdas[1] + 1.5).abs() < 1e-12);
}

#[test]
fn gaussian_has_no_plateaus() {
    let tmp = tempfile::tempdir().unwrap();
    assert_eq!(
        run(
            "spectrum",
            &configs().join("gaussian_spectrum.json"),
            tmp.path()
        ),
        0
    );
    let csv = std::fs::read_to_string(tmp.path().join("plateaus.csv")).unwrap();
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn config_errors_name_the_field() {
    let tmp = tempfile::tempdir().unwrap();
    let unknown = write_config(
        tmp.path(),
        "unknown.json",
        r#"{"schema_version": 1, "experiment": "x", "kernel": {"family": "gaussian", "sigma": 1.0, "colour": 2}}"#,
    );
    let out = Command::new(BIN)
        .args(["spectrum", "--config"])
        .arg(&unknown)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("colour"));

    let grid = write_config(
        tmp.path(),
        "grid.json",
        r#"{"schema_version": 1, "experiment": "x", "kernel": {"family": "gaussian", "sigma": 1.0},
            "grid": {"half_width": 40.0, "n_points": 1000}}"#,
    );
    let out = Command::new(BIN)
        .args(["spectrum", "--config"])
        .arg(&grid)
        .arg("--out")
        .arg(tmp.path())
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("grid.n_points"));

    let version = write_config(
        tmp.path(),
        "v.json",
        r#"{"schema_version": 7, "experiment": "x", "kernel": {"family": "quartic_exp"}}"#,
    );
    assert_eq!(run("spectrum", &version, tmp.path()), 1);
}

#[test]
fn recurrent_kernel_cannot_stabilize() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "rec.json",
        r#"{"schema_version": 1, "experiment": "rec", "kernel": {"family": "gaussian", "sigma": 1.0},
            "potential": {"profile": "bump", "delta": 0.95},
            "stabilize": {"dt": 0.05, "t_max": 10.0, "n_points": 1024, "spacing": 0.125, "reach": 8.0}}"#,
    );
    assert_eq!(run("stabilize", &cfg, tmp.path()), 3);
}

#[test]
fn oracle_breach_exits_two() {
    let tmp = tempfile::tempdir().unwrap();
    let cfg = write_config(
        tmp.path(),
        "strict.json",
        r#"{"schema_version": 1, "experiment": "strict", "kernel": {"family": "quartic_exp"},
            "oracle": {"clt_n": [16], "clt_ratios": [0.0, 0.5], "clt_tol": 1e-9}}"#,
    );
    assert_eq!(run("oracle", &cfg, tmp.path()), 2);
    assert!(tmp.path().join("oracle.json").exists());
}
