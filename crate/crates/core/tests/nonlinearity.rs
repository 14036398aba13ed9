mod common;

use common::gauss;
use frontlab::nonlinearity::{make_builtin, validate_class, Reaction};
use frontlab::{Kind, Nonlinearity};
use proptest::prelude::*;

#[test]
fn cubic_unbalance_integral() {
    let nl = make_builtin(Kind::Bistable, Some(0.25)).unwrap();
    assert!((nl.integral(0.0, 1.0) - 1.0 / 24.0).abs() <= 1e-15);
    let err = make_builtin(Kind::Bistable, Some(0.5)).unwrap_err();
    assert!(err.to_string().contains("integral"), "{err}");
}

#[test]
fn combustion_dead_zone() {
    let nl = make_builtin(Kind::Combustion, Some(0.5)).unwrap();
    assert_eq!(nl.f(0.25), 0.0);
    for k in 0..=50 {
        assert_eq!(nl.potential_f(0.01 * k as f64), 0.0);
    }
}

#[test]
fn validation_reports() {
    let logistic_as_bistable = Nonlinearity::unchecked(Kind::Bistable, None, Reaction::Logistic, 2.0);
    let r = validate_class(&logistic_as_bistable, 2000);
    assert!(!r.passed());
    assert!(r.check("interior zero theta in (0,1)").is_some_and(|c| !c.passed));

    let zero_as_combustion = Nonlinearity::unchecked(Kind::Combustion, Some(0.5), Reaction::Zero, 2.0);
    let r = validate_class(&zero_as_combustion, 2000);
    assert!(r.check("f > 0 on (theta,1)").is_some_and(|c| !c.passed));

    let r = validate_class(&Nonlinearity::combustion(0.5).unwrap(), 2000);
    assert!(r.passed(), "{:?}", r.failures());
    let r = validate_class(&Nonlinearity::logistic(), 2000);
    assert!(r.passed(), "{:?}", r.failures());
}

#[test]
fn ground_level_root() {
    let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
    let v = (5.0 - 7f64.sqrt()) / 6.0;
    assert!(nl.potential_f(v).abs() <= 1e-15);
    // smallest root above θ
    let below: Vec<f64> = (1..100).map(|k| 0.25 + (v - 0.25) * k as f64 / 100.0).collect();
    assert!(below.iter().all(|&u| nl.potential_f(u) > 0.0));
}

#[test]
fn shifted_potential() {
    let nl = Nonlinearity::combustion(0.5).unwrap();
    assert_eq!(nl.shifted_potential_g(0.0).unwrap(), 0.0);
    let u: f64 = 0.25;
    let exact = 2.0 * (0.5 * u.powi(3) / 3.0 - u.powi(4) / 4.0);
    assert!((nl.shifted_potential_g(u).unwrap() - exact).abs() <= 1e-15);
    let gs: Vec<f64> = (0..=100)
        .map(|k| nl.shifted_potential_g(0.005 * k as f64).unwrap())
        .collect();
    assert!(gs.windows(2).all(|w| w[1] > w[0]));
    assert!(Nonlinearity::logistic().shifted_potential_g(0.1).is_err());
}

#[test]
fn lambda0_values() {
    let l = |a: f64| Nonlinearity::bistable_cubic(a).unwrap().lambda0().unwrap();
    assert!((l(0.25) - 2.0).abs() <= 1e-12);
    assert!((l(0.04) - 5.0).abs() <= 1e-12);
    // finite-difference cross-check of f'(0)
    let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
    let fd = (nl.f(1e-7) - nl.f(-1e-7)) / 2e-7;
    assert!((fd + 0.25).abs() <= 1e-8);
    assert!(Nonlinearity::combustion(0.5).unwrap().lambda0().is_err());
}

#[test]
fn tabulated_cubic_integrates_like_the_closed_form() {
    let us: Vec<f64> = (0..=400).map(|k| 2.0 * k as f64 / 400.0).collect();
    let fs: Vec<f64> = us.iter().map(|u| u * (1.0 - u) * (u - 0.25)).collect();
    let tab = Nonlinearity::tabulated(Kind::Bistable, Some(0.25), None, us, fs, 2.0).unwrap();
    let exact = Nonlinearity::bistable_cubic(0.25).unwrap();
    for k in 0..=20 {
        let u = 0.05 * k as f64;
        assert!((tab.potential_f(u) - exact.potential_f(u)).abs() <= 1e-6, "u = {u}");
    }
}

#[test]
fn tabulated_rejects_bad_tables() {
    assert!(Nonlinearity::tabulated(Kind::Bistable, None, None, vec![0.0, 1.0], vec![0.0, 0.0], 2.0).is_err());
    let us = vec![0.0, 0.5, 1.0, 2.0];
    let fs = vec![0.0, 0.1, 0.0, -0.5];
    // positive on (0,1): not bistable
    assert!(Nonlinearity::tabulated(Kind::Bistable, None, None, us.clone(), fs.clone(), 2.0).is_err());
    assert!(Nonlinearity::tabulated(Kind::Monostable, None, None, us, fs, 2.0).is_ok());
}

proptest! {
    #[test]
    fn potential_matches_quadrature(a in 0.05f64..0.45, u in 0.0f64..2.0) {
        let nl = Nonlinearity::bistable_cubic(a).unwrap();
        let f = |s: f64| s * (1.0 - s) * (s - a);
        let q = -2.0 * gauss(&f, 0.0, u, 8);
        prop_assert!((nl.potential_f(u) - q).abs() <= 1e-12);
    }

    #[test]
    fn potential_derivative_is_minus_two_f(u in 0.01f64..1.9, theta in 0.1f64..0.9) {
        for nl in [Nonlinearity::logistic(), Nonlinearity::combustion(theta).unwrap()] {
            let d = 1e-5;
            let fd = (nl.potential_f(u + d) - nl.potential_f(u - d)) / (2.0 * d);
            prop_assert!((fd + 2.0 * nl.f(u)).abs() <= 1e-8, "{} at {u}", nl.kind());
        }
    }

    #[test]
    fn g_is_nonnegative_and_bounded(theta in 0.1f64..0.9, s in 0.0f64..1.0) {
        let nl = Nonlinearity::combustion(theta).unwrap();
        let u = s * (1.0 - theta);
        let g = nl.shifted_potential_g(u).unwrap();
        let fmax = (0..=200).map(|k| nl.f(theta + (1.0 - theta) * k as f64 / 200.0)).fold(0.0, f64::max);
        prop_assert!(g >= 0.0 && g <= 2.0 * fmax * u * 1.0001);
    }

    #[test]
    fn validation_is_stable_under_refinement(a in 0.05f64..0.45) {
        let nl = Nonlinearity::bistable_cubic(a).unwrap();
        prop_assert!(validate_class(&nl, 1000).passed());
        prop_assert!(validate_class(&nl, 8000).passed());
    }
}
