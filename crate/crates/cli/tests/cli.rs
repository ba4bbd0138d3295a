//! Spec-file parsing and argument handling.

use std::path::PathBuf;
use std::process::Command;

use semithermo_cli::parse_spec;

fn specs_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../specs")
}

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_semithermo"))
}

#[test]
fn shipped_pair_spec_parses() {
    let (spec, name) = parse_spec(&specs_dir().join("z2pm2.json")).unwrap();
    assert_eq!(spec.generator_count(), 2);
    assert_eq!(spec.generators()[0].degree(), 2);
    assert_eq!(spec.generators()[1].degree(), 2);
    assert!(name.unwrap().contains("z^2"));
    assert_eq!(spec.escape_radius(), Some(4.0));
}

#[test]
fn empty_generator_list_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.json");
    std::fs::write(&path, r#"{"generators": []}"#).unwrap();
    let err = parse_spec(&path).unwrap_err().to_string();
    assert!(err.contains("validation error"), "{err}");
}

#[test]
fn common_factor_is_a_validation_error() {
    // numerator and denominator both divisible by (z - 1)
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("common.json");
    std::fs::write(
        &path,
        r#"{"generators": [{"num": [[-1,0],[0,0],[1,0]], "den": [[1,0],[-2,0],[1,0]]}]}"#,
    )
    .unwrap();
    let err = format!("{:#}", parse_spec(&path).unwrap_err());
    assert!(err.contains("validation error"), "{err}");
    assert!(err.contains("share a root"), "{err}");
}

#[test]
fn malformed_json_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\"generators\": [\n  {\"num\": [[1,0]\n}").unwrap();
    let err = format!("{:#}", parse_spec(&path).unwrap_err());
    assert!(err.contains("parse error"), "{err}");
    assert!(err.contains("line"), "no position in: {err}");
}

#[test]
fn degree_one_generator_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("moebius.json");
    std::fs::write(&path, r#"{"generators": [{"num": [[1,0],[2,0]], "den": [[1,0],[1,0]]}]}"#)
        .unwrap();
    let err = format!("{:#}", parse_spec(&path).unwrap_err());
    assert!(err.contains("degree-1"), "{err}");
}

#[test]
fn unknown_subcommand_exits_two_with_usage() {
    let out = bin()
        .args(["--spec", "x.json", "--out", "y", "frobnicate"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.to_lowercase().contains("usage"), "{stderr}");
}

#[test]
fn stochastic_subcommand_requires_seed() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--spec",
            specs_dir().join("z2pm2.json").to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "render-global",
            "--grid",
            "64x64",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("--seed"), "{stderr}");
}

#[test]
fn tolerance_overrides_are_validated_and_applied() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--spec",
            specs_dir().join("z2.json").to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--tol",
            "tol_t=1e-5",
            "dimension",
        ])
        .output()
        .unwrap();
    assert!(out.status.success());
    let csv = std::fs::read_to_string(dir.path().join("bowen.csv")).unwrap();
    let fields: Vec<f64> =
        csv.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    let width = fields[2] - fields[1];
    assert!(width <= 1e-5, "bracket width {width}");

    let bad = bin()
        .args([
            "--spec",
            specs_dir().join("z2.json").to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--tol",
            "nonsense=1",
            "dimension",
        ])
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("unknown tolerance"));
}

#[test]
fn module_errors_exit_one() {
    // base point on the postcritical set
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .args([
            "--spec",
            specs_dir().join("z2pm2.json").to_str().unwrap(),
            "--out",
            dir.path().to_str().unwrap(),
            "--depth",
            "4",
            "dimension",
            "--base-point",
            "2,0",
        ])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("base point"), "{stderr}");
}
