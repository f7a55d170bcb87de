use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_robinlab"))
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str], cfg: &Path, out: &Path) -> Output {
    bin().args(args).arg(cfg).arg("--out").arg(out).output().expect("spawn")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn square_config_is_sound_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run"], &config("square_p2.json"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    for f in ["solution.csv", "diagnostics.json", "levels.csv", "profile.csv", "positivity.json", "criteria.csv", "summary.txt"] {
        assert!(dir.path().join(f).exists(), "missing {f}");
    }
    let pos = read_json(&dir.path().join("positivity.json"));
    assert_eq!(pos["sound"], true);
    assert!(pos["slack"].as_f64().unwrap() >= 0.0);
    assert!(pos["T"].as_f64().unwrap() > 0.0);
    let levels = std::fs::read_to_string(dir.path().join("levels.csv")).unwrap();
    assert_eq!(levels.lines().count(), 21);
}

#[test]
fn sharp_cusp_trend_decays() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["run"], &config("cusp_alpha3_p2.json"), dir.path());
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let trend = read_json(&dir.path().join("trend.json"));
    assert_eq!(trend["class"], "decaying");
    let criteria = std::fs::read_to_string(dir.path().join("criteria.csv")).unwrap();
    assert!(criteria.lines().nth(1).unwrap().ends_with("negative,analytic"), "{criteria}");
}

#[test]
fn schema_violation_names_the_field_and_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "mesh": {"h_target": "fine"}}"#).unwrap();
    let o = run(&["run"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("mesh.h_target"), "{err}");
}

#[test]
fn unsound_level_checks_exit_two() {
    // a negative source gives a negative field, so every level check fails
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("neg.json");
    std::fs::write(
        &cfg,
        r#"{"schema_version": 1, "domain": {"kind": "unit_square"},
            "run": {"source": {"kind": "constant", "value": -1.0}}}"#,
    )
    .unwrap();
    let o = run(&["run"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(2), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn sweep_rows_follow_grid_order() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin()
        .args(["sweep"])
        .arg(config("sweep_power.json"))
        .args(["--threads", "3", "--out"])
        .arg(dir.path())
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let mut r = csv::Reader::from_path(dir.path().join("sweep.csv")).unwrap();
    let rows: Vec<csv::StringRecord> = r.records().map(Result::unwrap).collect();
    assert_eq!(rows.len(), 15);
    let keys: Vec<(String, String)> = rows.iter().map(|r| (r[0].to_string(), r[2].to_string())).collect();
    assert_eq!(keys[0], ("1.0".into(), "1.5".into()));
    assert_eq!(keys[1], ("1.0".into(), "2.0".into()));
    assert_eq!(keys[14], ("3.0".into(), "3.0".into()));
    let a3p2 = &rows[13];
    assert_eq!(&a3p2[4], "negative");
    assert_eq!(&a3p2[9], "certified-divergent");
    assert!(rows.iter().all(|r| r[11].is_empty()));
}

#[test]
fn empty_sweep_writes_header_only() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("empty.json");
    std::fs::write(&cfg, r#"{"schema_version": 1, "sweep": {"alpha": []}}"#).unwrap();
    let o = run(&["sweep"], &cfg, &dir.path().join("out"));
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("out/sweep.csv")).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("alpha,gamma,p,beta"));
}

#[test]
fn sweep_without_section_is_an_error() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["sweep"], &config("square_p2.json"), dir.path());
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("sweep"));
}
