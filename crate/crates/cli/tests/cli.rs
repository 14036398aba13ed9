// reference values keep the digits they were computed with
#![allow(clippy::excessive_precision)]

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn frontlab(kind: &str, config: &str, dir: &Path, extra: &[&str]) -> Output {
    let cfg = dir.join("run.toml");
    fs::write(&cfg, config).unwrap();
    Command::new(env!("CARGO_BIN_EXE_frontlab"))
        .arg(kind)
        .arg("--config")
        .arg(&cfg)
        .arg("--out")
        .arg(dir.join("out"))
        .args(extra)
        .output()
        .unwrap()
}

#[test]
fn xi0_succeeds_and_writes_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let out = frontlab(
        "xi0",
        "kind = \"xi0\"\nmu = 1.0\n[stefan]\ntheta = 0.5\n",
        dir.path(),
        &[],
    );
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("xi0 = 0.46478592064624"), "{stdout}");
    let v: f64 = fs::read_to_string(dir.path().join("out/xi0.txt"))
        .unwrap()
        .trim()
        .parse()
        .unwrap();
    assert!((v - 0.464785920646244446566).abs() <= 1e-15);
    assert!(dir.path().join("out/manifest.toml").exists());
}

#[test]
fn monostable_sigma_star_is_a_scientific_failure() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = "kind = \"sigma-star\"\nh0 = 3.0\n[nonlinearity]\nkind = \"monostable\"\n\
               [solver]\nn = 128\n[tolerances]\nsigma_star = 1e-4\n";
    let out = frontlab("sigma-star", cfg, dir.path(), &["--workers", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bracket"));
    let manifest = fs::read_to_string(dir.path().join("out/manifest.toml")).unwrap();
    assert!(manifest.contains("exit_code = 2"), "{manifest}");
    assert!(manifest.contains("workers = 2"), "{manifest}");
}

#[test]
fn unknown_key_exits_with_one() {
    let dir = tempfile::tempdir().unwrap();
    let out = frontlab("xi0", "kind = \"xi0\"\nthetaa = 0.5\n", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("thetaa"));
    assert!(!dir.path().join("out").exists());
}

#[test]
fn config_kind_wins_over_command_line() {
    let dir = tempfile::tempdir().unwrap();
    let out = frontlab("bump", "kind = \"xi0\"\n", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(dir.path().join("out/xi0.txt").exists());
}

#[test]
fn unknown_kind_is_rejected_by_the_parser() {
    let dir = tempfile::tempdir().unwrap();
    let out = frontlab("nope", "kind = \"xi0\"\n", dir.path(), &[]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("invalid value"));
}
