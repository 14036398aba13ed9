//! Experiment dispatch: one config in, CSVs, a report and a manifest out.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};
use toml::{Table, Value};

use crate::classify::{
    bracket_trajectories, classify_run, classify_run_with_frames, divergence_window, fit_shift, fit_speed, sigma_star,
    Law, SigmaStarResult, SpeedFit,
};
use crate::config::{ExperimentKind, RunConfig};
use crate::fb_solver::{theta_level, DtRule, FrontState, Mode, Solver, SolverConfig, StopRule, Trajectory};
use crate::nonlinearity::{Kind, Nonlinearity};
use crate::semiwave::solve_semiwave;
use crate::stationary::{barrier_residuals, bump, doubling_grid, ground_state};
use crate::stefan::{solve_xi0, StefanExact};
use crate::zeronum::{reflection_difference, solution_difference, zero_count_series};
use crate::{Error, Result};

pub const REPORT_FILE: &str = "report.txt";
pub const MANIFEST_FILE: &str = "manifest.toml";

/// Structured-text report (TOML table).
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Report(pub Table);

impl Report {
    pub fn set(&mut self, key: &str, value: impl Into<Value>) -> &mut Self {
        self.0.insert(key.to_string(), value.into());
        self
    }

    pub fn opt(&mut self, key: &str, value: Option<f64>) -> &mut Self {
        if let Some(v) = value {
            self.set(key, v);
        }
        self
    }

    pub fn section(&mut self, key: &str, sub: Report) -> &mut Self {
        self.0.insert(key.to_string(), Value::Table(sub.0));
        self
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.0.get(key)
    }

    pub fn render(&self) -> String {
        toml::to_string(&self.0).expect("report serializes")
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Output {
    /// (file name, contents), written in this order.
    pub files: Vec<(String, String)>,
    pub report: Report,
    /// Scientific failure that still produced partial output.
    pub failure: Option<String>,
}

impl Output {
    fn new() -> Self {
        Self {
            files: Vec::new(),
            report: Report::default(),
            failure: None,
        }
    }

    fn file(&mut self, name: &str, contents: String) {
        self.files.push((name.to_string(), contents));
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub exit_code: i32,
    pub out_dir: PathBuf,
    /// (file name, sha256 hex) for every file except the manifest.
    pub digests: Vec<(String, String)>,
    pub error: Option<String>,
}

pub fn exit_code_for(err: &Error) -> i32 {
    if err.is_scientific() {
        2
    } else {
        1
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .fold(String::with_capacity(64), |mut s, b| {
            let _ = write!(s, "{b:02x}");
            s
        })
}

/// Computes an experiment without touching the disk.
pub fn execute(cfg: &RunConfig) -> Result<Output> {
    cfg.validate()?;
    match cfg.kind {
        ExperimentKind::Simulate => simulate(cfg),
        ExperimentKind::Classify => classify(cfg),
        ExperimentKind::SigmaStar => sigma_star_kind(cfg),
        ExperimentKind::Semiwave => semiwave(cfg),
        ExperimentKind::Xi0 => xi0(cfg),
        ExperimentKind::Groundstate => groundstate(cfg),
        ExperimentKind::Bump => bump_kind(cfg),
        ExperimentKind::FitSpeed => fit_speed_kind(cfg),
        ExperimentKind::Zeronum => zeronum(cfg),
        ExperimentKind::StefanCheck => stefan_check(cfg),
        ExperimentKind::BarrierCheck => barrier_check(cfg),
    }
}

/// Runs the experiment and writes its artifacts to `out_dir`.
/// Only I/O problems are returned as errors; failures of the computation are
/// reported in the exit code, the report and the manifest.
pub fn run_experiment(cfg: &RunConfig, out_dir: &Path) -> std::io::Result<RunOutcome> {
    std::fs::create_dir_all(out_dir)?;
    let (mut out, exit_code, error) = match execute(cfg) {
        Ok(out) => {
            let code = if out.failure.is_some() { 2 } else { 0 };
            let err = out.failure.clone();
            (out, code, err)
        }
        Err(e) => (Output::new(), exit_code_for(&e), Some(e.to_string())),
    };
    out.report.set("kind", cfg.kind.name());
    out.report.set("status", if exit_code == 0 { "ok" } else { "failed" });
    if let Some(e) = &error {
        out.report.set("error", e.as_str());
    }
    let mut digests = Vec::new();
    for (name, contents) in &out.files {
        std::fs::write(out_dir.join(name), contents)?;
        digests.push((name.clone(), sha256_hex(contents.as_bytes())));
    }
    let report = out.report.render();
    std::fs::write(out_dir.join(REPORT_FILE), &report)?;
    digests.push((REPORT_FILE.to_string(), sha256_hex(report.as_bytes())));

    let mut manifest = Table::new();
    let mut run = Table::new();
    run.insert("kind".into(), cfg.kind.name().into());
    run.insert("exit_code".into(), Value::Integer(exit_code as i64));
    run.insert("version".into(), env!("CARGO_PKG_VERSION").into());
    if let Some(e) = &error {
        run.insert("error".into(), e.as_str().into());
    }
    manifest.insert("run".into(), Value::Table(run));
    let resolved: Table = toml::from_str(&cfg.to_toml()).expect("config round-trips");
    manifest.insert("config".into(), Value::Table(resolved));
    let outputs: Table = digests
        .iter()
        .map(|(n, d)| (n.clone(), Value::from(d.as_str())))
        .collect();
    manifest.insert("outputs".into(), Value::Table(outputs));
    std::fs::write(
        out_dir.join(MANIFEST_FILE),
        toml::to_string(&manifest).expect("manifest serializes"),
    )?;

    Ok(RunOutcome {
        exit_code,
        out_dir: out_dir.to_path_buf(),
        digests,
        error,
    })
}

fn csv(header: &str, rows: impl IntoIterator<Item = Vec<f64>>) -> String {
    let mut s = String::from(header);
    s.push('\n');
    for row in rows {
        for (i, v) in row.iter().enumerate() {
            if i > 0 {
                s.push(',');
            }
            let _ = write!(s, "{v}");
        }
        s.push('\n');
    }
    s
}

fn trajectory_csv(traj: &Trajectory) -> String {
    csv(
        "t,g,h,ux_g,ux_h,max_u,u_center",
        traj.samples
            .iter()
            .map(|s| vec![s.t, s.g, s.h, s.ux_g, s.ux_h, s.max_u, s.u_center]),
    )
}

fn state_csv(state: &FrontState) -> String {
    csv(
        "x,u",
        state.xs().into_iter().zip(&state.values).map(|(x, u)| vec![x, *u]),
    )
}

fn trajectory_report(traj: &Trajectory) -> Report {
    let s = &traj.final_state;
    let mut r = Report::default();
    r.set("t", s.t)
        .set("g", s.g)
        .set("h", s.h)
        .set("max_u", s.max_u())
        .set("steps", traj.steps as i64)
        .set("rejections", traj.rejections as i64)
        .set("stop", format!("{:?}", traj.stop).to_lowercase());
    if let Some(f) = &traj.failure {
        r.set("failure", f.as_str());
    }
    r
}

fn simulate(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let mut solver = Solver::new(&nl, cfg.solver_config())?;
    let state = solver.init(&|x| cfg.shape.eval(x, cfg.h0), cfg.h0, cfg.mode())?;
    let traj = solver.run(state, StopRule::Time(cfg.solver.t_end));
    let mut out = Output::new();
    out.file("trajectory.csv", trajectory_csv(&traj));
    out.file("final_state.csv", state_csv(&traj.final_state));
    out.report.section("final", trajectory_report(&traj));
    out.failure = traj.failure.clone();
    Ok(out)
}

fn classify(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let (rep, traj) = classify_run(
        &nl,
        &cfg.solver_config(),
        &cfg.shape,
        cfg.h0,
        cfg.mode(),
        cfg.margins(),
        cfg.solver.t_cap,
    )?;
    let mut out = Output::new();
    out.file("trajectory.csv", trajectory_csv(&traj));
    out.report
        .set("verdict", format!("{:?}", rep.verdict).to_lowercase())
        .opt("decided_at", rep.decided_at)
        .set("max_u", rep.evidence.max_u)
        .set("u_center", rep.evidence.u_center)
        .set("h", rep.evidence.h)
        .set("g", rep.evidence.g);
    if !rep.note.is_empty() {
        out.report.set("note", rep.note);
    }
    out.failure = traj.failure.clone();
    Ok(out)
}

fn probes_csv(r: &SigmaStarResult) -> String {
    let mut s = String::from("sigma,verdict,decided_at,t_cap\n");
    for p in &r.probes {
        let d = p.decided_at.map_or(String::new(), |t| t.to_string());
        let v = format!("{:?}", p.verdict).to_lowercase();
        let _ = writeln!(s, "{},{v},{d},{}", p.sigma, p.t_cap);
    }
    s
}

fn bracket_report(r: &SigmaStarResult, workers: usize) -> Report {
    let mut rep = Report::default();
    rep.set("lo", r.lo)
        .set("hi", r.hi)
        .set("relative_width", r.relative_width())
        .set("iterations", r.iterations as i64)
        .set("probes", r.probes.len() as i64)
        .set("stalled", r.stalled)
        .set("monotone", r.monotone())
        .set("workers", workers as i64);
    rep
}

fn sigma_star_kind(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let opts = cfg.sigma_star_options();
    let r = sigma_star(&cfg.shape, cfg.h0, &nl, &cfg.solver_config(), cfg.mode(), opts)?;
    let mut out = Output::new();
    out.file("probes.csv", probes_csv(&r));
    out.report.section("bracket", bracket_report(&r, opts.workers));
    if r.stalled {
        out.failure = Some("bisection stalled on undecided probes".into());
    }
    Ok(out)
}

fn fit_report(fit: &SpeedFit) -> Report {
    let mut r = Report::default();
    r.set("coefficient", fit.coefficient)
        .set("offset", fit.offset)
        .set("rms", fit.rms)
        .set("samples", fit.samples as i64);
    r
}

fn law_name(law: Law) -> &'static str {
    match law {
        Law::Linear => "linear",
        Law::Log => "log",
        Law::Sqrt => "sqrt",
    }
}

/// Everything the transition protocol measures for one shape.
#[derive(Debug, Clone)]
pub struct TransitionStudy {
    pub bracket: SigmaStarResult,
    pub lo: Trajectory,
    pub hi: Trajectory,
    pub window: (f64, f64),
    pub fits: Vec<SpeedFit>,
    /// States of the spreading endpoint at evenly spaced times in the window.
    pub frames: Vec<FrontState>,
}

impl TransitionStudy {
    pub fn fit(&self, law: Law) -> &SpeedFit {
        self.fits.iter().find(|f| f.law == law).expect("all laws fitted")
    }
}

/// σ* bracket, endpoint reruns, divergence window, all three law fits and
/// `n_frames` states of the upper endpoint inside the window.
pub fn transition_study(
    nl: &Nonlinearity,
    cfg: &RunConfig,
    shape: &crate::fb_solver::Shape,
    mode: Mode,
    n_frames: usize,
) -> Result<TransitionStudy> {
    let solver_cfg = cfg.solver_config();
    let opts = cfg.sigma_star_options();
    let bracket = sigma_star(shape, cfg.h0, nl, &solver_cfg, mode, opts)?;
    let (lo, hi) = bracket_trajectories(shape, cfg.h0, nl, &solver_cfg, mode, &bracket, opts.margins, opts.t_cap)?;
    let window = divergence_window(&lo, &hi, cfg.tolerances.rel_gap)?;
    let fits = [Law::Linear, Law::Log, Law::Sqrt]
        .into_iter()
        .map(|law| fit_speed(&hi, law, window))
        .collect::<Result<Vec<_>>>()?;
    let times: Vec<f64> = (0..n_frames)
        .map(|i| window.0 + (window.1 - window.0) * i as f64 / (n_frames.max(2) - 1) as f64)
        .collect();
    let (_, _, frames) = classify_run_with_frames(
        nl,
        &solver_cfg,
        &shape.with_sigma(bracket.hi),
        cfg.h0,
        mode,
        opts.margins,
        opts.t_cap,
        &times,
    )?;
    Ok(TransitionStudy {
        bracket,
        lo,
        hi,
        window,
        fits,
        frames,
    })
}

fn fit_speed_kind(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let study = transition_study(&nl, cfg, &cfg.shape, cfg.mode(), 50)?;
    let mut out = Output::new();
    out.file("probes.csv", probes_csv(&study.bracket));
    let fronts = |t: &Trajectory| csv("t,g,h", t.samples.iter().map(|s| vec![s.t, s.g, s.h]));
    out.file("fronts_lo.csv", fronts(&study.lo));
    out.file("fronts_hi.csv", fronts(&study.hi));
    out.report
        .section("bracket", bracket_report(&study.bracket, cfg.workers()))
        .set("window", vec![study.window.0, study.window.1])
        .set("law", law_name(cfg.fit.law))
        .set("coefficient", study.fit(cfg.fit.law).coefficient);
    let mut fits = Report::default();
    for f in &study.fits {
        fits.section(law_name(f.law), fit_report(f));
    }
    out.report.section("fits", fits);
    match nl.kind() {
        Kind::Bistable => {
            let gs = ground_state(&nl)?;
            let shifts: Vec<Vec<f64>> = study.frames.iter().map(|s| vec![s.t, fit_shift(s, &gs)]).collect();
            let (lo, hi) = shifts.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), r| {
                (a.min(r[1]), b.max(r[1]))
            });
            out.report
                .set("lambda0", gs.lambda0)
                .set("shift_min", lo)
                .set("shift_max", hi);
            out.file("shift.csv", csv("t,x0", shifts));
        }
        Kind::Combustion => {
            let theta = nl.theta().expect("combustion carries theta");
            let ratios: Vec<Vec<f64>> = study
                .frames
                .iter()
                .map(|s| vec![s.t, theta_level(s, theta).map_or(0.0, |x| x / s.h)])
                .collect();
            out.report
                .set("two_xi0", 2.0 * solve_xi0(cfg.mu, theta)?)
                .opt("theta_ratio_end", ratios.last().map(|r| r[1]));
            out.file("theta_ratio.csv", csv("t,theta_over_h", ratios));
        }
        _ => {}
    }
    Ok(out)
}

fn semiwave(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let sw = solve_semiwave(&nl, cfg.mu, cfg.tolerances.semiwave)?;
    let (zs, qs) = sw.samples();
    let mut out = Output::new();
    out.file("profile.csv", csv("z,q", zs.iter().zip(qs).map(|(z, q)| vec![*z, *q])));
    out.report
        .set("c_star", sw.c_star)
        .set("mu", sw.mu)
        .set("residual", sw.residual)
        .set("bracket", vec![sw.bracket.0, sw.bracket.1])
        .set("iterations", sw.iterations as i64)
        .set("z_max", sw.z_max)
        .set("front_slope_defect", (cfg.mu * sw.slope(0.0) - sw.c_star).abs());
    Ok(out)
}

fn xi0(cfg: &RunConfig) -> Result<Output> {
    let theta = cfg.stefan.theta;
    let xi = solve_xi0(cfg.mu, theta)?;
    let mut out = Output::new();
    out.file("xi0.txt", format!("{xi}\n"));
    out.report.set("xi0", xi).set("mu", cfg.mu).set("theta", theta);
    Ok(out)
}

fn groundstate(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let gs = ground_state(&nl)?;
    let (xs, vs) = gs.knots();
    let mut out = Output::new();
    out.file("profile.csv", csv("x,v", xs.iter().zip(vs).map(|(x, v)| vec![*x, *v])));
    out.report
        .set("v0", gs.v0)
        .set("lambda0", gs.lambda0)
        .set("a0", gs.a0)
        .set("a", gs.a);
    Ok(out)
}

fn bump_kind(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let bp = bump(&nl, cfg.bump.b)?;
    let n = 400;
    let rows = (0..=n).map(|i| {
        let x = bp.big_l * i as f64 / n as f64;
        vec![x, bp.value(x)]
    });
    let mut out = Output::new();
    out.file("profile.csv", csv("x,v", rows));
    let l_slope = bp.l * bp.slope_at(bp.l).abs();
    out.report
        .set("b", bp.b)
        .set("l", bp.l)
        .set("big_l", bp.big_l)
        .set("slope", bp.slope)
        .set("g_b", bp.g_b())
        .set("l_times_slope", l_slope)
        .set("l_over_big_l", bp.l / bp.big_l)
        .set("slope_bound_holds", l_slope < 2.0 * bp.b)
        .set("ratio_bound_holds", bp.l / bp.big_l < 2.0 * bp.b / bp.theta);
    Ok(out)
}

fn zeronum(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let solver_cfg = cfg.solver_config();
    let t_end = cfg.solver.t_end;
    let n = cfg.zeronum.frames;
    let times: Vec<f64> = (0..=n).map(|i| t_end * i as f64 / n as f64).collect();
    let run = |shape: &crate::fb_solver::Shape, mode: Mode| -> Result<Vec<FrontState>> {
        let mut solver = Solver::new(&nl, solver_cfg.clone())?;
        let state = solver.init(&|x| shape.eval(x, cfg.h0), cfg.h0, mode)?;
        let (traj, frames) = solver.run_with_frames(state, StopRule::Time(t_end), &times);
        match traj.failure {
            Some(f) => Err(Error::StepFailure {
                t: traj.final_state.t,
                reason: f,
            }),
            None => Ok(frames),
        }
    };
    let frames: Vec<(f64, Vec<f64>, Vec<f64>)> = match &cfg.zeronum.other {
        Some(other) => {
            let a = run(&cfg.shape, cfg.mode())?;
            let b = run(other, crate::classify::default_mode(other))?;
            a.iter()
                .zip(&b)
                .map(|(p, q)| {
                    let (xs, ws) = solution_difference(p, q);
                    (p.t, xs, ws)
                })
                .collect()
        }
        None => {
            let mode = cfg.solver.mode.unwrap_or(Mode::TwoFront);
            run(&cfg.shape, mode)?
                .iter()
                .map(|p| {
                    let (xs, ws) = reflection_difference(p);
                    (p.t, xs, ws)
                })
                .collect()
        }
    };
    let series = zero_count_series(&frames, cfg.zero_options());
    let mut out = Output::new();
    out.file("zero_series.csv", series.to_csv());
    let increases = series.increases();
    let unflagged = series.unflagged_drops(2);
    out.report
        .set("frames", series.times.len() as i64)
        .set(
            "source",
            if cfg.zeronum.other.is_some() {
                "difference"
            } else {
                "reflection"
            },
        )
        .set("first_pattern", series.patterns.first().cloned().unwrap_or_default())
        .set("last_pattern", series.patterns.last().cloned().unwrap_or_default())
        .set("first_count", series.counts.first().copied().unwrap_or(0) as i64)
        .set("last_count", series.counts.last().copied().unwrap_or(0) as i64)
        .set("increases", increases.len() as i64)
        .set("unflagged_drops", unflagged.len() as i64)
        .set(
            "degenerate_frames",
            series.degenerate.iter().filter(|d| **d).count() as i64,
        );
    Ok(out)
}

/// Pinned-left run with f ≡ 0 and u(t, 0) = θ against the exact Stefan
/// solution; returns (max relative error of h over the samples, final relative error, steps).
pub fn stefan_run(mu: f64, theta: f64, t0: f64, t_end: f64, n: usize, dt_rule: DtRule) -> Result<(f64, f64, usize)> {
    let exact = StefanExact::new(mu, theta)?;
    let nl = Nonlinearity::zero();
    let cfg = SolverConfig {
        n,
        mu,
        dt_rule,
        dt_max: 1.0,
        t_end,
        snapshot_stride: 0,
        boundary_stencil: crate::fb_solver::Stencil::OneSided2nd,
    };
    let mut solver = Solver::new(&nl, cfg)?;
    let state = solver.init_at(&|x| exact.phi(t0, x).max(0.0), exact.rho(t0), Mode::PinnedLeft, t0)?;
    let traj = solver.run(state, StopRule::Time(t_end));
    if let Some(f) = traj.failure {
        return Err(Error::StepFailure {
            t: traj.final_state.t,
            reason: f,
        });
    }
    let max_rel = traj
        .samples
        .iter()
        .map(|s| ((s.h - exact.rho(s.t)) / exact.rho(s.t)).abs())
        .fold(0.0, f64::max);
    let end = traj.final_state.h / exact.rho(t_end) - 1.0;
    Ok((max_rel, end, traj.steps))
}

fn stefan_check(cfg: &RunConfig) -> Result<Output> {
    let st = &cfg.stefan;
    let mut rows = Vec::new();
    for &n in &st.n_list {
        let (max_rel, end, steps) = stefan_run(cfg.mu, st.theta, st.t0, st.t_end, n, cfg.solver.dt_rule)?;
        rows.push(vec![n as f64, max_rel, end, steps as f64]);
    }
    let orders: Vec<f64> = rows.windows(2).map(|w| (w[0][2] / w[1][2]).abs().log2()).collect();
    let mut out = Output::new();
    out.report
        .set("xi0", solve_xi0(cfg.mu, st.theta)?)
        .set("max_relative_error", rows.last().map_or(0.0, |r| r[1]))
        .set("orders", orders);
    out.file("stefan.csv", csv("n,max_rel_err,final_rel_err,steps", rows));
    Ok(out)
}

fn barrier_check(cfg: &RunConfig) -> Result<Output> {
    let nl = cfg.nonlinearity()?;
    let gs = ground_state(&nl)?;
    let lam2 = gs.lambda0 * gs.lambda0;
    let b = &cfg.barrier;
    let m = b.m.unwrap_or(2.0 * lam2 / cfg.mu);
    let m1 = b.m1.unwrap_or(lam2 / (4.0 * cfg.mu));
    let t_grid = doubling_grid(b.t0, b.t_max);
    let x_grid: Vec<f64> = (0..b.nx).map(|i| b.x_max * i as f64 / (b.nx - 1) as f64).collect();
    let rep = barrier_residuals(&gs, cfg.mu, m, m1, &t_grid, &x_grid);
    let mut out = Output::new();
    let mut s = String::from("check,onset,worst_after_onset,worst_overall,failing_at_end,evaluations\n");
    for c in &rep.checks {
        let onset = c.onset.map_or(String::new(), |t| t.to_string());
        let _ = writeln!(
            s,
            "\"{}\",{onset},{},{},{},{}",
            c.name, c.worst_after_onset, c.worst_overall, c.failing_at_end, c.evaluations
        );
    }
    out.file("barrier.csv", s);
    out.report
        .set("m", m)
        .set("m1", m1)
        .set("rho", rep.rho)
        .opt("onset", rep.onset);
    let mut checks = Report::default();
    for c in &rep.checks {
        let mut r = Report::default();
        r.opt("onset", c.onset)
            .set("worst_after_onset", c.worst_after_onset)
            .set("failing_at_end", c.failing_at_end);
        checks.section(&c.name, r);
    }
    out.report.section("checks", checks);
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(
            sha256_hex(b""),
            "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855"
        );
    }

    #[test]
    fn xi0_kind_reports_root() {
        let cfg = RunConfig::new(ExperimentKind::Xi0);
        let out = execute(&cfg).unwrap();
        assert_eq!(out.files[0].0, "xi0.txt");
        let v: f64 = out.files[0].1.trim().parse().unwrap();
        assert!((v - 0.464_785_920_646_244_4).abs() < 1e-15);
    }
}
