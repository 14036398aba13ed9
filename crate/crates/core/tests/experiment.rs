use std::fs;

use frontlab::config::{parse_str, ExperimentKind, NonlinearitySpec, RunConfig};
use frontlab::experiment::{execute, run_experiment, sha256_hex, MANIFEST_FILE, REPORT_FILE};
use frontlab::{Error, Kind};

fn bump_config() -> RunConfig {
    let mut cfg = RunConfig::new(ExperimentKind::Bump);
    cfg.nonlinearity = Some(NonlinearitySpec::builtin(Kind::Combustion, Some(0.5)));
    cfg.bump.b = 0.01;
    cfg
}

#[test]
fn toml_round_trip() {
    let mut cfg = bump_config();
    cfg.h0 = 2.5;
    cfg.solver.n = 256;
    cfg.sigma_star.workers = Some(3);
    let back = parse_str(&cfg.to_toml()).unwrap();
    assert_eq!(back, cfg);
}

#[test]
fn unknown_keys_are_named() {
    let err = parse_str("kind = \"bump\"\nh00 = 1.0").unwrap_err();
    assert!(matches!(err, Error::Parse(ref m) if m.contains("h00")), "{err}");
    let err = parse_str("kind = \"bump\"\n[nonlinearity]\nkind = \"combustion\"\ntheta = 0.5\nslope = 1").unwrap_err();
    assert!(matches!(err, Error::Parse(ref m) if m.contains("slope")), "{err}");
    assert!(matches!(parse_str("kind = \"nope\""), Err(Error::Parse(_))));
}

#[test]
fn invalid_values_name_the_field() {
    for (text, field) in [
        ("kind = \"simulate\"\n[solver]\nn = 10", "solver.n"),
        ("kind = \"xi0\"\n[stefan]\ntheta = 1.5", "stefan.theta"),
        (
            "kind = \"sigma-star\"\n[tolerances]\nsigma_star = 1e-13",
            "tolerances.sigma_star",
        ),
        ("kind = \"sigma-star\"\n[sigma_star]\nworkers = 0", "sigma_star.workers"),
    ] {
        match parse_str(text) {
            Err(Error::Config { field: f, .. }) => assert_eq!(f, field),
            other => panic!("{text}: {other:?}"),
        }
    }
}

#[test]
fn missing_nonlinearity_is_a_config_error() {
    let cfg = RunConfig::new(ExperimentKind::Groundstate);
    assert!(matches!(execute(&cfg), Err(Error::Config { ref field, .. }) if field == "nonlinearity"));
}

#[test]
fn run_writes_artifacts_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = bump_config();
    let out = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(out.exit_code, 0);
    assert!(out.error.is_none());
    for (name, digest) in &out.digests {
        let bytes = fs::read(dir.path().join(name)).unwrap();
        assert_eq!(&sha256_hex(&bytes), digest, "{name}");
    }
    let report = fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
    assert!(report.contains("status = \"ok\""), "{report}");
    assert!(report.contains("slope_bound_holds = true"), "{report}");

    let manifest: toml::Table = fs::read_to_string(dir.path().join(MANIFEST_FILE))
        .unwrap()
        .parse()
        .unwrap();
    assert_eq!(manifest["run"]["exit_code"].as_integer(), Some(0));
    let resolved = toml::to_string(&manifest["config"]).unwrap();
    assert_eq!(parse_str(&resolved).unwrap(), cfg);
    let outputs = manifest["outputs"].as_table().unwrap();
    assert_eq!(outputs.len(), out.digests.len());
    assert_eq!(outputs["profile.csv"].as_str().unwrap(), out.digests[0].1);
}

#[test]
fn reruns_are_byte_identical() {
    let mut cfg = RunConfig::new(ExperimentKind::Semiwave);
    cfg.nonlinearity = Some(NonlinearitySpec::builtin(Kind::Monostable, None));
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = run_experiment(&cfg, a.path()).unwrap();
    let rb = run_experiment(&cfg, b.path()).unwrap();
    assert_eq!(ra.digests, rb.digests);
    let ma = fs::read(a.path().join(MANIFEST_FILE)).unwrap();
    let mb = fs::read(b.path().join(MANIFEST_FILE)).unwrap();
    assert_eq!(ma, mb);
}

#[test]
fn scientific_failures_exit_with_two() {
    let mut cfg = RunConfig::new(ExperimentKind::SigmaStar);
    cfg.nonlinearity = Some(NonlinearitySpec::builtin(Kind::Monostable, None));
    cfg.h0 = 3.0;
    cfg.solver.n = 128;
    cfg.tolerances.sigma_star = 1e-4;
    cfg.sigma_star.workers = Some(2);
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(out.exit_code, 2, "{:?}", out.error);
    assert!(out.error.as_deref().unwrap().contains("bracket"));
    let report = fs::read_to_string(dir.path().join(REPORT_FILE)).unwrap();
    assert!(report.contains("status = \"failed\""));
    assert!(dir.path().join(MANIFEST_FILE).exists());
}

#[test]
fn input_errors_exit_with_one() {
    let cfg = RunConfig::new(ExperimentKind::Groundstate);
    let dir = tempfile::tempdir().unwrap();
    let out = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(out.exit_code, 1);

    // a bistable cubic with a balanced potential is rejected as a nonlinearity
    let mut cfg = RunConfig::new(ExperimentKind::Groundstate);
    cfg.nonlinearity = Some(NonlinearitySpec::builtin(Kind::Bistable, Some(0.5)));
    let out = run_experiment(&cfg, dir.path()).unwrap();
    assert_eq!(out.exit_code, 1, "{:?}", out.error);
}

#[test]
fn every_kind_has_defaults() {
    for k in ExperimentKind::ALL {
        let cfg = RunConfig::new(k);
        assert_eq!(cfg.kind, k);
        cfg.validate().unwrap();
    }
}
