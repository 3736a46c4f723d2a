use std::path::Path;
use std::process::{Command, Output};

use fanoise_cli::RunConfig;

fn fanoise(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fanoise"))
        .args(args)
        .arg("--quiet")
        .output()
        .expect("fanoise runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

#[test]
fn missing_geometry_key_is_named() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.json",
        r#"{"geometry": {"intake_diameter_d1": 0.165, "fan_diameter_d2": 0.268,
            "fan_width_b2": 0.053, "rotation_speed_n": 2800}}"#,
    );
    let out = fanoise(&["--config", &cfg, "geom"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("geometry.blade_count_z"), "{stderr}");
}

#[test]
fn unknown_subcommand_and_help() {
    assert_eq!(fanoise(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(fanoise(&["--help"]).status.code(), Some(0));
    assert_eq!(
        fanoise(&["--threads", "0", "config"]).status.code(),
        Some(1)
    );
}

#[test]
fn oracle_exit_codes() {
    let out = fanoise(&["validate", "dipole"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("PASS"));
    // The 5 m / 10 m ratio sits just outside 1% of one half.
    let out = fanoise(&["validate", "decay"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
    assert_eq!(
        fanoise(&["validate", "decay", "--distance", "20"])
            .status
            .code(),
        Some(0)
    );
}

#[test]
fn unreadable_inputs_exit_three() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.csv");
    let out = fanoise(&["spectrum", "--signal", missing.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
    let out = fanoise(&["--config", missing.to_str().unwrap(), "config"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn malformed_signal_reports_the_row() {
    let dir = tempfile::tempdir().unwrap();
    let sig = write(dir.path(), "mic.csv", "time_s,p_pa\n0,1\n0.001,oops\n");
    let out = fanoise(&["spectrum", "--signal", &sig]);
    assert_ne!(out.status.code(), Some(0));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(":3"), "{stderr}");
}

#[test]
fn printed_config_round_trips() {
    let out = fanoise(&["config"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let back = RunConfig::from_json(&text, Path::new("stdout")).unwrap();
    assert_eq!(back, RunConfig::reference());
    assert_eq!(back.to_canonical_json(), text);
}
