//! Desk-scale acceptance checks. Each test prints one `criterion N: PASS|FAIL` line
//! to stderr (uncaptured) and then asserts the same condition.

mod common;

use std::f64::consts::PI;
use std::io::Write;
use std::sync::OnceLock;
use std::time::Instant;

use common::{collocation_speed_extrapolated, cubic, cubic_prime, logistic, logistic_prime};
use frontlab::classify::{classify_run, fit_shift, sigma_star, Law, Margins, SigmaStarOptions, Verdict};
use frontlab::config::{ExperimentKind, NonlinearitySpec, RunConfig};
use frontlab::experiment::{sha256_hex, stefan_run, transition_study, TransitionStudy};
use frontlab::fb_solver::{theta_level, DtRule, FrontState, Mode, Shape, Solver, SolverConfig, StopRule, Trajectory};
use frontlab::semiwave::{solve_semiwave, spreading_speed_check};
use frontlab::stationary::{barrier_residuals, bump, doubling_grid, ground_state, LOWER_FRONT};
use frontlab::stefan::{solve_xi0, xi0_lhs};
use frontlab::zeronum::{reflection_difference, solution_difference, zero_count_series, ZeroCountSeries, ZeroOptions};
use frontlab::{Kind, Nonlinearity};
use proptest::strategy::{Strategy, ValueTree};
use proptest::test_runner::TestRunner;

fn verdict(n: u32, pass: bool, detail: impl std::fmt::Display) -> bool {
    let tag = if pass { "PASS" } else { "FAIL" };
    let _ = writeln!(std::io::stderr(), "criterion {n}: {tag} {detail}");
    pass
}

fn cubic_nl() -> Nonlinearity {
    Nonlinearity::bistable_cubic(0.25).unwrap()
}

const H0: f64 = 3.0;

fn transition_config(nl: NonlinearitySpec, h0: f64) -> RunConfig {
    let mut cfg = RunConfig::new(ExperimentKind::FitSpeed);
    cfg.nonlinearity = Some(nl);
    cfg.h0 = h0;
    cfg.solver.n = 800;
    cfg.tolerances.sigma_star = 1e-12;
    cfg.sigma_star.sigma_init = 0.5;
    cfg.sigma_star.workers = Some(4);
    cfg
}

fn bistable_shapes() -> [(Shape, Mode); 3] {
    [
        (Shape::Cos { sigma: 1.0 }, Mode::SymmetricHalf),
        (Shape::Parabola { sigma: 1.0 }, Mode::SymmetricHalf),
        (
            Shape::TwoBump {
                sigma: 1.0,
                base: 1.0,
                left: 0.4,
                right: 0.0,
                width: 1.0,
            },
            Mode::TwoFront,
        ),
    ]
}

/// σ*-tuned studies of the cubic for the cos, parabola and two-bump shapes, shared by several criteria.
fn bistable_studies() -> &'static [TransitionStudy] {
    static STUDIES: OnceLock<Vec<TransitionStudy>> = OnceLock::new();
    STUDIES.get_or_init(|| {
        let cfg = transition_config(NonlinearitySpec::builtin(Kind::Bistable, Some(0.25)), H0);
        let nl = cubic_nl();
        bistable_shapes()
            .iter()
            .map(|(shape, mode)| transition_study(&nl, &cfg, shape, *mode, 101).unwrap())
            .collect()
    })
}

fn frames(nl: &Nonlinearity, cfg: &SolverConfig, shape: &Shape, h0: f64, mode: Mode, times: &[f64]) -> Vec<FrontState> {
    let mut solver = Solver::new(nl, cfg.clone()).unwrap();
    let s = solver.init(&|x| shape.eval(x, h0), h0, mode).unwrap();
    let (traj, frames) = solver.run_with_frames(s, StopRule::Time(*times.last().unwrap()), times);
    assert!(traj.failure.is_none());
    frames
}

fn max_gap(a: &Trajectory, b: &Trajectory, window: (f64, f64)) -> f64 {
    a.samples
        .iter()
        .filter(|s| s.t >= window.0 && s.t <= window.1)
        .map(|s| (s.h - b.h_at(s.t)).abs())
        .fold(0.0, f64::max)
}

fn common_window(a: (f64, f64), b: (f64, f64)) -> (f64, f64) {
    (a.0.max(b.0), a.1.min(b.1))
}

#[test]
fn criterion_01_exact_stefan_oracle() {
    let start = Instant::now();
    let runs: Vec<(f64, f64)> = [400, 800, 1600]
        .iter()
        .map(|&n| {
            let (max_rel, end, _) = stefan_run(1.0, 0.5, 1.0, 100.0, n, DtRule::Cfl(0.5)).unwrap();
            (max_rel, end)
        })
        .collect();
    let orders: Vec<f64> = runs.windows(2).map(|w| (w[0].1 / w[1].1).abs().log2()).collect();
    let min_order = orders.iter().copied().fold(f64::INFINITY, f64::min);
    let err = runs[2].0;
    let secs = start.elapsed().as_secs_f64();
    let pass = err <= 5e-3 && min_order >= 1.8;
    assert!(verdict(
        1,
        pass,
        format!("max rel err {err:.3e} (<= 5e-3), orders {orders:.3?} (>= 1.8), {secs:.1}s")
    ));
}

#[test]
fn criterion_02_xi0_defect_and_small_argument() {
    let mut runner = TestRunner::deterministic();
    let strategy = (0.1f64..10.0, 0.1f64..0.9);
    let mut worst: f64 = 0.0;
    for _ in 0..50 {
        let (mu, theta) = strategy.new_tree(&mut runner).unwrap().current();
        let xi = solve_xi0(mu, theta).unwrap();
        worst = worst.max((xi0_lhs(xi) - mu * theta).abs());
    }
    let xi = solve_xi0(1.0, 0.02).unwrap();
    let small = ((0.02f64 / 2.0).sqrt() - xi).abs() / xi;
    let pass = worst <= 1e-12 && small <= 0.02;
    assert!(verdict(
        2,
        pass,
        format!("worst defect {worst:.2e} (<= 1e-12), small-argument rel {small:.3e} (<= 0.02)")
    ));
}

#[test]
fn criterion_03_semiwave_certificate() {
    type Scalar = Box<dyn Fn(f64) -> f64>;
    let cases: [(Nonlinearity, Scalar, Scalar); 2] = [
        (Nonlinearity::logistic(), Box::new(logistic), Box::new(logistic_prime)),
        (cubic_nl(), Box::new(cubic(0.25)), Box::new(cubic_prime(0.25))),
    ];
    let mut pass = true;
    let mut detail = Vec::new();
    for (nl, f, df) in &cases {
        let sw = solve_semiwave(nl, 1.0, 1e-10).unwrap();
        let (_, q) = sw.samples();
        let flux = (sw.mu * sw.slope(0.0) - sw.c_star).abs();
        let oracle = collocation_speed_extrapolated(f.as_ref(), df.as_ref(), 1.0);
        let gap = (sw.c_star - oracle).abs();
        let ok = sw.value(0.0) == 0.0
            && flux <= 1e-8
            && sw.residual <= 1e-7
            && q.windows(2).all(|w| w[1] > w[0])
            && gap <= 1e-5;
        pass &= ok;
        detail.push(format!(
            "{}: c* {:.10} flux {flux:.1e} defect {:.1e} oracle gap {gap:.1e}",
            nl.kind(),
            sw.c_star,
            sw.residual
        ));
    }
    assert!(verdict(3, pass, detail.join("; ")));
}

#[test]
fn criterion_04_spreading_speed() {
    let nl = cubic_nl();
    let shape = Shape::Cos { sigma: 1.0 };
    let coarse = SolverConfig {
        n: 200,
        ..SolverConfig::default()
    };
    let opts = SigmaStarOptions {
        tol: 1e-3,
        sigma_init: 0.5,
        workers: 4,
        ..SigmaStarOptions::default()
    };
    let bracket = sigma_star(&shape, H0, &nl, &coarse, Mode::SymmetricHalf, opts).unwrap();
    let estimate = 0.5 * (bracket.lo + bracket.hi);
    let cfg = SolverConfig {
        n: 800,
        ..SolverConfig::default()
    };
    let mut solver = Solver::new(&nl, cfg).unwrap();
    let s = solver
        .init(
            &|x| shape.with_sigma(2.0 * estimate).eval(x, H0),
            H0,
            Mode::SymmetricHalf,
        )
        .unwrap();
    let traj = solver.run(s, StopRule::Time(200.0));
    let sw = solve_semiwave(&nl, 1.0, 1e-10).unwrap();
    let rep = spreading_speed_check(&traj, &sw);
    let pass = rep.applicable && rep.rel_gap <= 0.03;
    assert!(verdict(
        4,
        pass,
        format!(
            "sigma {:.4}, slope {:.6} vs c* {:.6}, rel gap {:.2e} (<= 0.03)",
            2.0 * estimate,
            rep.slope_h,
            rep.c_star,
            rep.rel_gap
        )
    ));
}

#[test]
fn criterion_05_bistable_log_law() {
    let studies = bistable_studies();
    let cos = &studies[0];
    let lambda0 = 2.0;
    let width = cos.bracket.relative_width();
    let (ta, tb) = cos.window;
    let log = cos.fit(Law::Log);
    let law_ok = if tb >= 10.0 * ta * (1.0 - 1e-12) {
        (log.coefficient - lambda0).abs() <= 0.1 * lambda0
    } else {
        cos.fit(Law::Sqrt).rms >= 3.0 * log.rms && cos.fit(Law::Linear).rms >= 3.0 * log.rms
    };
    let gs = ground_state(&cubic_nl()).unwrap();
    let spread = |s: &TransitionStudy| {
        let xs: Vec<f64> = s.frames.iter().map(|f| fit_shift(f, &gs)).collect();
        xs.iter().copied().fold(f64::NEG_INFINITY, f64::max) - xs.iter().copied().fold(f64::INFINITY, f64::min)
    };
    let (cos_shift, two_shift) = (spread(cos), spread(&studies[2]));
    let pass = width <= 1e-12 && law_ok && cos_shift < 0.05 && two_shift < 0.05;
    assert!(verdict(
        5,
        pass,
        format!(
            "sigma* {:.12} width {width:.2e}, window ({ta:.2}, {tb:.2}), log c {:.4} (target 2 +- 10%), \
             x0 variation cos {cos_shift:.2e} two-bump {two_shift:.2e} (< 0.05)",
            cos.bracket.hi, log.coefficient
        )
    ));
}

#[test]
fn criterion_06_combustion_sqrt_law() {
    let theta = 0.5;
    let cfg = transition_config(NonlinearitySpec::builtin(Kind::Combustion, Some(theta)), 12.0);
    let nl = cfg.nonlinearity().unwrap();
    let study = transition_study(&nl, &cfg, &Shape::Cos { sigma: 1.0 }, Mode::SymmetricHalf, 101).unwrap();
    let target = 2.0 * solve_xi0(1.0, theta).unwrap();
    let c = study.fit(Law::Sqrt).coefficient;
    let ratios: Vec<f64> = study
        .frames
        .iter()
        .map(|s| theta_level(s, theta).map_or(f64::NAN, |x| x / s.h))
        .collect();
    let last = *ratios.last().unwrap();
    let decreasing = ratios.windows(2).all(|w| w[1] <= w[0]);
    let pass = (c - target).abs() <= 0.05 * target && decreasing && last < 0.1;
    assert!(verdict(
        6,
        pass,
        format!(
            "sigma* {:.12}, window ({:.2}, {:.2}), sqrt c {c:.4} vs 2xi0 {target:.4} (5%), \
             theta/h {:.3} -> {last:.3} (< 0.1, decreasing {decreasing})",
            study.bracket.hi, study.window.0, study.window.1, ratios[0]
        )
    ));
}

#[test]
fn criterion_07_monostable_vanishing_geometry() {
    let nl = Nonlinearity::logistic();
    let n = 400;
    let cfg = SolverConfig {
        n,
        ..SolverConfig::default()
    };
    let bound = PI / 1.0f64.sqrt();
    let mut vanished = 0;
    let mut worst = f64::NEG_INFINITY;
    let shapes = [
        Shape::Cos { sigma: 1.0 },
        Shape::Parabola { sigma: 1.0 },
        Shape::TwoBump {
            sigma: 1.0,
            base: 1.0,
            left: 0.4,
            right: 0.0,
            width: 1.0,
        },
    ];
    for shape in &shapes {
        for h0 in [0.3, 0.8, 1.2, 1.5] {
            for sigma in [0.01, 0.1, 0.3, 1.0] {
                let (rep, traj) = classify_run(
                    &nl,
                    &cfg,
                    &shape.with_sigma(sigma),
                    h0,
                    Mode::TwoFront,
                    Margins::default(),
                    500.0,
                )
                .unwrap();
                if rep.verdict != Verdict::Vanishing {
                    continue;
                }
                vanished += 1;
                let mut solver = Solver::new(&nl, cfg.clone()).unwrap();
                let end = solver.run(traj.final_state, StopRule::Time(500.0)).final_state;
                let cell = (end.h - end.g) / n as f64;
                worst = worst.max(end.h - end.g - bound - 2.0 * cell);
            }
        }
    }
    let pass = vanished > 0 && worst <= 0.0;
    assert!(verdict(
        7,
        pass,
        format!("{vanished} vanishing runs, worst (h - g) - (pi + 2 cells) = {worst:.4e} (<= 0)")
    ));
}

#[test]
fn criterion_08_bump_inequalities() {
    let nl = Nonlinearity::combustion(0.5).unwrap();
    let mut pass = true;
    let mut prev_l = f64::INFINITY;
    let mut detail = Vec::new();
    for b in [1e-3, 1e-2, 0.05] {
        let p = bump(&nl, b).unwrap();
        let slope = p.l * p.slope_at(p.l).abs();
        let ratio = p.l / p.big_l;
        pass &= slope < 2.0 * b && ratio < 2.0 * b / 0.5 && p.l < prev_l;
        prev_l = p.l;
        detail.push(format!("b {b}: l {:.6} l|V'| {slope:.6} l/L {ratio:.6}", p.l));
    }
    assert!(verdict(8, pass, detail.join("; ")));
}

#[test]
fn criterion_09_zero_number() {
    let studies = bistable_studies();
    let nl = cubic_nl();
    let cfg = SolverConfig {
        n: 800,
        ..SolverConfig::default()
    };
    let series = |f: Vec<(f64, Vec<f64>, Vec<f64>)>| zero_count_series(&f, ZeroOptions::default());
    let ok = |z: &ZeroCountSeries| z.times.len() >= 100 && z.increases().is_empty() && z.unflagged_drops(2).is_empty();

    let (cos, par, two) = (&studies[0], &studies[1], &studies[2]);
    let t_end = common_window(cos.window, par.window).1;
    let times: Vec<f64> = (0..=200).map(|k| t_end * k as f64 / 200.0).collect();
    let [(cos_shape, _), (par_shape, _), (two_shape, _)] = bistable_shapes();
    let a = frames(
        &nl,
        &cfg,
        &cos_shape.with_sigma(cos.bracket.hi),
        H0,
        Mode::SymmetricHalf,
        &times,
    );
    let b = frames(
        &nl,
        &cfg,
        &par_shape.with_sigma(par.bracket.hi),
        H0,
        Mode::SymmetricHalf,
        &times,
    );
    let diff = series(
        a.iter()
            .zip(&b)
            .map(|(p, q)| {
                let (xs, ws) = solution_difference(p, q);
                (p.t, xs, ws)
            })
            .collect(),
    );

    let t_two = two.window.1;
    let times: Vec<f64> = (0..=200).map(|k| t_two * k as f64 / 200.0).collect();
    let c = frames(
        &nl,
        &cfg,
        &two_shape.with_sigma(two.bracket.hi),
        H0,
        Mode::TwoFront,
        &times,
    );
    let refl = series(
        c.iter()
            .map(|p| {
                let (xs, ws) = reflection_difference(p);
                (p.t, xs, ws)
            })
            .collect(),
    );
    let pass = ok(&diff) && ok(&refl);
    let describe = |z: &ZeroCountSeries| {
        format!(
            "{} frames, counts {} -> {}, increases {}, unflagged drops {}",
            z.times.len(),
            z.counts[0],
            z.counts[z.counts.len() - 1],
            z.increases().len(),
            z.unflagged_drops(2).len()
        )
    };
    assert!(verdict(
        9,
        pass,
        format!("difference: {}; reflection: {}", describe(&diff), describe(&refl))
    ));
}

#[test]
fn criterion_10_barriers() {
    let gs = ground_state(&cubic_nl()).unwrap();
    let mu = 1.0;
    let lam2 = gs.lambda0 * gs.lambda0;
    let ts = doubling_grid(1.0, 1e6);
    let xs: Vec<f64> = (0..600).map(|i| 60.0 * i as f64 / 599.0).collect();
    let good = barrier_residuals(&gs, mu, 2.0 * lam2 / mu, lam2 / (4.0 * mu), &ts, &xs);
    let good_ok = good.onset.is_some()
        && good
            .checks
            .iter()
            .all(|c| c.onset.is_some() && c.worst_after_onset == 0.0 && !c.failing_at_end);
    let broken = barrier_residuals(&gs, mu, 0.5 * lam2 / mu, lam2 / (4.0 * mu), &ts, &xs);
    let lower = broken.check(LOWER_FRONT).unwrap();
    let broken_fails = lower.failing_at_end && lower.worst_overall > 0.0;
    assert!(verdict(
        10,
        good_ok && broken_fails,
        format!(
            "tuned barriers onset {:?}, all signed {good_ok}; broken m lower-front residual {:.3e}, fails {broken_fails}",
            good.onset, lower.worst_overall
        )
    ));
}

#[test]
fn criterion_11_front_gap() {
    let studies = bistable_studies();
    let bound = 3.0 * (H0 - H0).abs().max(1.0);
    let mut worst: f64 = 0.0;
    let mut detail = Vec::new();
    for (i, j, name) in [(0, 1, "cos/parabola"), (0, 2, "cos/two-bump")] {
        let w = common_window(studies[i].window, studies[j].window);
        let gap = max_gap(&studies[i].hi, &studies[j].hi, w);
        worst = worst.max(gap);
        detail.push(format!("{name} {gap:.4} over ({:.2}, {:.2})", w.0, w.1));
    }
    assert!(verdict(
        11,
        worst <= bound,
        format!("{} (<= {bound})", detail.join(", "))
    ));
}

#[test]
fn criterion_12_property_suites() {
    let nl = cubic_nl();
    let cfg = SolverConfig {
        n: 200,
        ..SolverConfig::default()
    };
    let run = |shape: &Shape, h0: f64, mode: Mode| {
        let mut solver = Solver::new(&nl, cfg.clone()).unwrap();
        let s = solver.init(&|x| shape.eval(x, h0), h0, mode).unwrap();
        solver.run(s, StopRule::Time(20.0))
    };

    // comparison nesting: ordered data stay ordered, fronts included
    let lo = run(&Shape::Parabola { sigma: 0.6 }, 2.0, Mode::TwoFront);
    let hi = run(&Shape::Parabola { sigma: 0.8 }, 2.4, Mode::TwoFront);
    let fl = &lo.final_state;
    let nested = lo.samples.iter().all(|s| s.h <= hi.h_at(s.t) + 1e-9)
        && fl
            .xs()
            .iter()
            .zip(&fl.values)
            .all(|(x, u)| *u <= hi.final_state.u_at(*x) + 1e-3);

    // front monotonicity
    let monotone = [&lo, &hi]
        .iter()
        .all(|t| t.samples.windows(2).all(|w| w[1].h >= w[0].h && w[1].g <= w[0].g));

    // symmetry preservation of even data in two-front mode
    let even = run(&Shape::Cos { sigma: 1.0 }, 3.0, Mode::TwoFront);
    let symmetric = even.samples.iter().all(|s| (s.h + s.g).abs() <= 1e-10 * (1.0 + s.h));

    // determinism digest
    let digest = || {
        let t = run(&bistable_shapes()[2].0, 3.0, Mode::TwoFront);
        let mut bytes = Vec::new();
        for s in &t.samples {
            for v in [s.t, s.g, s.h] {
                bytes.extend_from_slice(&v.to_le_bytes());
            }
        }
        for v in &t.final_state.values {
            bytes.extend_from_slice(&v.to_le_bytes());
        }
        sha256_hex(&bytes)
    };
    let d = digest();
    let deterministic = d == digest();
    let pass = nested && monotone && symmetric && deterministic;
    assert!(verdict(
        12,
        pass,
        format!(
            "nesting {nested}, monotone fronts {monotone}, symmetry {symmetric}, digest stable {deterministic} ({})",
            &d[..12]
        )
    ));
}
