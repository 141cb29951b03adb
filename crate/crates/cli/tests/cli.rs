use std::path::Path;
use std::process::{Command, Output};

use sha2::{Digest, Sha256};

fn bin(args: &[&str], dir: &Path, threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_deformed-spectra"));
    cmd.args(args).arg("--output-dir").arg(dir);
    match threads {
        Some(t) => cmd.env("DEFORMED_SPECTRA_THREADS", t),
        None => cmd.env_remove("DEFORMED_SPECTRA_THREADS"),
    };
    cmd.output().unwrap()
}

fn manifest(dir: &Path) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(dir.join("manifest.json")).unwrap()).unwrap()
}

#[test]
fn butterfly_writes_csv_svg_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &[
            "butterfly",
            "--operator",
            "X",
            "--q-grid",
            "20",
            "--n-max",
            "30",
        ],
        dir.path(),
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );

    let csv = std::fs::read_to_string(dir.path().join("butterfly.csv")).unwrap();
    assert_eq!(
        csv.lines().next(),
        Some("p,q,omega_over_pi,eigenvalue_index,eigenvalue")
    );
    assert_eq!(csv.lines().count(), 1 + 20 * 30);
    assert!(!csv.contains('\r'));
    let svg = std::fs::read_to_string(dir.path().join("butterfly.svg")).unwrap();
    assert_eq!(svg.matches("<circle").count(), 600);

    let m = manifest(dir.path());
    assert_eq!(m["command"], "butterfly");
    assert_eq!(m["config"]["q_grid"], 20);
    assert!(m["wall_time_seconds"].as_f64().unwrap() >= 0.0);
    let files = m["files"].as_array().unwrap();
    assert_eq!(files.len(), 2);
    for f in files {
        let bytes = std::fs::read(dir.path().join(f["name"].as_str().unwrap())).unwrap();
        assert_eq!(f["sha256"], hex::encode(Sha256::digest(&bytes)));
        assert_eq!(f["bytes"], bytes.len());
    }
}

#[test]
fn outputs_do_not_depend_on_thread_count() {
    let args = [
        "butterfly",
        "--q-grid",
        "16",
        "--n-max",
        "24",
        "--format",
        "csv,json,svg",
    ];
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    assert!(bin(&args, a.path(), Some("1")).status.success());
    assert!(bin(&args, b.path(), Some("4")).status.success());
    assert_eq!(manifest(a.path())["threads"], 1);
    assert_eq!(manifest(b.path())["threads"], 4);
    for name in ["butterfly.csv", "butterfly.json", "butterfly.svg"] {
        assert_eq!(
            std::fs::read(a.path().join(name)).unwrap(),
            std::fs::read(b.path().join(name)).unwrap(),
            "{name}"
        );
    }
}

#[test]
fn env_threads_override_flag() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["spectrum", "--n-max", "4", "--threads", "3"],
        dir.path(),
        Some("2"),
    );
    assert!(out.status.success());
    assert_eq!(manifest(dir.path())["threads"], 2);
}

#[test]
fn half_pi_spectrum() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &[
            "spectrum",
            "--operator",
            "X",
            "--omega-pi",
            "1/2",
            "--n-max",
            "6",
        ],
        dir.path(),
        None,
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("spectrum.csv")).unwrap();
    assert_eq!(
        csv,
        "index,eigenvalue\n0,-0.707106781186548\n1,-0.707106781186548\n2,-0.707106781186548\n\
         3,0.707106781186548\n4,0.707106781186548\n5,0.707106781186548\n"
    );
}

#[test]
fn energy_levels_at_half_pi() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["energy-levels", "--omega-pi", "1/2", "--count", "10"],
        dir.path(),
        None,
    );
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("energy_levels.csv")).unwrap();
    let rows: Vec<&str> = csv.lines().skip(1).collect();
    assert_eq!(rows.len(), 10);
    assert!(rows.iter().all(|r| r.ends_with(",0.5")));
}

#[test]
fn usage_errors_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    for args in [
        &["spectrum", "--n-max", "1"][..],
        &["spectrum", "--operator", "Q"],
        &["bands", "--format", "svg"],
        &["frobnicate"],
        &["edge-states", "--n-max", "50", "--n-max-b", "50"],
    ] {
        let out = bin(args, dir.path(), None);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty());
    }
    let out = bin(&["spectrum"], dir.path(), Some("many"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn solver_failure_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin(
        &["spectrum", "--boundary", "periodic", "--n-max", "5000"],
        dir.path(),
        None,
    );
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("spectrum failed"), "{err}");
}

#[test]
fn config_file_drives_run() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"operator": "Xnu", "nu": 0.3, "omega_spec": {"pi_rational": {"p": 2, "q": 5}}, "n_max": 350, "formats": ["json", "csv"]}"#,
    )
    .unwrap();
    let out = bin(
        &["bands", "--config", cfg.to_str().unwrap()],
        dir.path(),
        None,
    );
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report: serde_json::Value =
        serde_json::from_slice(&std::fs::read(dir.path().join("bands.json")).unwrap()).unwrap();
    assert_eq!(report["band_count"], 5);
    assert_eq!(manifest(dir.path())["config"]["nu"], 0.3);
}
