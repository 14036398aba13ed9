//! Spreading/vanishing verdicts, the σ* threshold search and speed-law fits.

use serde::{Deserialize, Serialize};

use crate::fb_solver::{FrontState, Mode, Shape, Solver, SolverConfig, StopReason, StopRule, Trajectory};
use crate::nonlinearity::{Kind, Nonlinearity};
use crate::numerics::roots::golden_min;
use crate::stationary::GroundState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Verdict {
    Spreading,
    Vanishing,
    Undecided,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Margins {
    pub up: f64,
    pub down: f64,
}

impl Default for Margins {
    fn default() -> Self {
        Self { up: 0.05, down: 0.05 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Evidence {
    pub max_u: f64,
    pub u_center: f64,
    pub h: f64,
    pub g: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OutcomeReport {
    pub verdict: Verdict,
    pub decided_at: Option<f64>,
    pub evidence: Evidence,
    pub note: String,
}

fn evidence(state: &FrontState) -> Evidence {
    Evidence {
        max_u: state.max_u(),
        u_center: state.u_at(0.0),
        h: state.h,
        g: state.g,
    }
}

/// Front advance needed before a spreading verdict.
pub fn spreading_distance(nl: &Nonlinearity) -> f64 {
    let peak = nl.peak_slope();
    let scale = if peak > 0.0 {
        std::f64::consts::PI / peak.sqrt()
    } else {
        f64::INFINITY
    };
    4.0 * scale.max(1.0)
}

/// Critical length π/√f'(0) for monostable f.
pub fn critical_length(nl: &Nonlinearity) -> Option<f64> {
    let d = nl.f_prime(0.0);
    (d > 0.0).then(|| std::f64::consts::PI / d.sqrt())
}

/// Verdict for a single state, None when neither criterion holds.
pub fn classify_state(state: &FrontState, nl: &Nonlinearity, margins: Margins, h0: f64, mu: f64) -> Option<Verdict> {
    match nl.kind() {
        Kind::Bistable | Kind::Combustion => {
            let theta = nl.theta()?;
            let max_u = state.max_u();
            if max_u < theta - margins.down {
                return Some(Verdict::Vanishing);
            }
            if state.h - h0 > spreading_distance(nl) && min_on_unit_interval(state) >= theta + margins.up {
                return Some(Verdict::Spreading);
            }
            None
        }
        Kind::Monostable => {
            let ell = critical_length(nl)?;
            let len = state.h - state.g;
            if len > ell {
                return Some(Verdict::Spreading);
            }
            if state.max_u() < margins.down {
                // ∫u bounds the remaining front travel: d/dt[(h-g)/μ + ∫u] = ∫f(u)
                // and ∫f(u) ≤ f'(0)∫u decays at rate κ = (π/ℓ)² - f'(0) on length ℓ.
                let d0 = nl.f_prime(0.0);
                let mass = state.mass();
                let mut pred = len;
                for _ in 0..50 {
                    let kappa = (std::f64::consts::PI / pred).powi(2) - d0;
                    if !(kappa > 0.0) {
                        return None;
                    }
                    let next = len + mu * mass * (1.0 + d0 / kappa);
                    if (next - pred).abs() < 1e-12 * pred {
                        pred = next;
                        break;
                    }
                    pred = next;
                }
                if pred < ell {
                    return Some(Verdict::Vanishing);
                }
            }
            None
        }
        Kind::Custom => None,
    }
}

fn min_on_unit_interval(state: &FrontState) -> f64 {
    if state.g > -1.0 && state.mode == Mode::TwoFront || state.h < 1.0 {
        return 0.0;
    }
    let mut lo = f64::INFINITY;
    for j in 0..=state.n() {
        let x = state.x(j);
        if x.abs() <= 1.0 {
            lo = lo.min(state.values[j]);
        }
    }
    lo.min(state.u_at(1.0)).min(state.u_at(-1.0))
}

/// Picks the half-domain mode for even shapes.
pub fn default_mode(shape: &Shape) -> Mode {
    if shape.is_even() {
        Mode::SymmetricHalf
    } else {
        Mode::TwoFront
    }
}

/// Runs until a verdict or `t_cap`.
pub fn classify_run(
    nl: &Nonlinearity,
    cfg: &SolverConfig,
    shape: &Shape,
    h0: f64,
    mode: Mode,
    margins: Margins,
    t_cap: f64,
) -> Result<(OutcomeReport, Trajectory)> {
    classify_run_with_frames(nl, cfg, shape, h0, mode, margins, t_cap, &[]).map(|(r, t, _)| (r, t))
}

/// `classify_run` plus states at `frame_times` (same step sequence).
#[allow(clippy::too_many_arguments)]
pub fn classify_run_with_frames(
    nl: &Nonlinearity,
    cfg: &SolverConfig,
    shape: &Shape,
    h0: f64,
    mode: Mode,
    margins: Margins,
    t_cap: f64,
    frame_times: &[f64],
) -> Result<(OutcomeReport, Trajectory, Vec<FrontState>)> {
    let mut solver = Solver::new(nl, cfg.clone())?;
    let state = solver.init(&|x| shape.eval(x, h0), h0, mode)?;
    let mut verdict = None;
    let mu = cfg.mu;
    let mut hook = |s: &FrontState| {
        verdict = classify_state(s, nl, margins, h0, mu);
        verdict.is_some()
    };
    let (traj, frames) = solver.run_with_frames(state, StopRule::Verdict { hook: &mut hook, t_cap }, frame_times);
    let v = verdict.unwrap_or(Verdict::Undecided);
    let mut note = String::new();
    if v == Verdict::Vanishing && nl.kind() == Kind::Combustion {
        note.push_str("combustion vanishing judged by max u < theta - margin (pure Stefan remnant not followed)");
    }
    if traj.stop == StopReason::Failure {
        note.push_str(traj.failure.as_deref().unwrap_or("step failure"));
    }
    let report = OutcomeReport {
        verdict: v,
        decided_at: (v != Verdict::Undecided).then_some(traj.final_state.t),
        evidence: evidence(&traj.final_state),
        note,
    };
    Ok((report, traj, frames))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SigmaStarOptions {
    /// Relative bracket width.
    pub tol: f64,
    pub t_cap: f64,
    pub sigma_init: f64,
    pub max_doublings: usize,
    pub max_bisections: usize,
    pub workers: usize,
    pub margins: Margins,
}

impl Default for SigmaStarOptions {
    fn default() -> Self {
        Self {
            tol: 1e-6,
            t_cap: 5000.0,
            sigma_init: 1.0,
            max_doublings: 60,
            max_bisections: 60,
            workers: 1,
            margins: Margins::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Probe {
    pub sigma: f64,
    pub verdict: Verdict,
    pub decided_at: Option<f64>,
    pub t_cap: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SigmaStarResult {
    pub lo: f64,
    pub hi: f64,
    pub iterations: usize,
    pub probes: Vec<Probe>,
    /// Bisection stopped on an undecided probe before reaching the tolerance.
    pub stalled: bool,
}

impl SigmaStarResult {
    /// No vanishing probe above a spreading one.
    pub fn monotone(&self) -> bool {
        let min_spread = self
            .probes
            .iter()
            .filter(|p| p.verdict == Verdict::Spreading)
            .map(|p| p.sigma)
            .fold(f64::INFINITY, f64::min);
        self.probes
            .iter()
            .filter(|p| p.verdict == Verdict::Vanishing)
            .all(|p| p.sigma < min_spread)
    }

    pub fn relative_width(&self) -> f64 {
        (self.hi - self.lo) / self.hi
    }
}

struct Prober<'a> {
    nl: &'a Nonlinearity,
    cfg: &'a SolverConfig,
    shape: &'a Shape,
    h0: f64,
    mode: Mode,
    opts: SigmaStarOptions,
}

impl Prober<'_> {
    fn probe(&self, sigma: f64) -> Result<Probe> {
        let shape = self.shape.with_sigma(sigma);
        let mut t_cap = self.opts.t_cap;
        let (mut rep, _) = classify_run(self.nl, self.cfg, &shape, self.h0, self.mode, self.opts.margins, t_cap)?;
        if rep.verdict == Verdict::Undecided {
            t_cap *= 2.0;
            rep = classify_run(self.nl, self.cfg, &shape, self.h0, self.mode, self.opts.margins, t_cap)?.0;
        }
        Ok(Probe {
            sigma,
            verdict: rep.verdict,
            decided_at: rep.decided_at,
            t_cap,
        })
    }

    fn probe_many(&self, sigmas: &[f64]) -> Result<Vec<Probe>> {
        if self.opts.workers <= 1 || sigmas.len() <= 1 {
            return sigmas.iter().map(|&s| self.probe(s)).collect();
        }
        std::thread::scope(|scope| {
            let handles: Vec<_> = sigmas.iter().map(|&s| scope.spawn(move || self.probe(s))).collect();
            handles
                .into_iter()
                .map(|h| h.join().expect("probe thread panicked"))
                .collect()
        })
    }
}

/// Brackets σ* for the family σ·φ by doubling, then bisection
/// (k-section with several workers).
pub fn sigma_star(
    shape: &Shape,
    h0: f64,
    nl: &Nonlinearity,
    cfg: &SolverConfig,
    mode: Mode,
    opts: SigmaStarOptions,
) -> Result<SigmaStarResult> {
    if !(opts.tol >= 1e-12) {
        return Err(Error::OutOfRange(format!("tol = {} below 1e-12", opts.tol)));
    }
    if !(opts.sigma_init > 0.0) {
        return Err(Error::OutOfRange("sigma_init must be positive".into()));
    }
    let prober = Prober {
        nl,
        cfg,
        shape,
        h0,
        mode,
        opts,
    };
    let mut probes = Vec::new();
    let mut lo = f64::NAN;
    let mut hi = f64::NAN;
    let first = prober.probe(opts.sigma_init)?;
    probes.push(first.clone());
    match first.verdict {
        Verdict::Spreading => hi = first.sigma,
        Verdict::Vanishing => lo = first.sigma,
        Verdict::Undecided => {}
    }
    // walk down from a spreading start, up otherwise
    let downward = first.verdict == Verdict::Spreading;
    let mut sigma = first.sigma;
    let mut doublings = 0;
    while lo.is_nan() || hi.is_nan() {
        if doublings >= opts.max_doublings {
            return Err(Error::BracketFailure(format!(
                "no {} verdict after {} {}; last sigma {sigma:e}",
                if downward { "vanishing" } else { "spreading" },
                doublings,
                if downward { "halvings" } else { "doublings" },
            )));
        }
        sigma = if downward { 0.5 * sigma } else { 2.0 * sigma };
        let p = match prober.probe(sigma) {
            Err(Error::InvalidInitial(msg)) => {
                return Err(Error::BracketFailure(format!(
                    "no spreading verdict up to sigma = {:e} ({msg})",
                    0.5 * sigma
                )))
            }
            r => r?,
        };
        probes.push(p.clone());
        match p.verdict {
            Verdict::Spreading => hi = sigma,
            Verdict::Vanishing => lo = sigma,
            Verdict::Undecided => {}
        }
        doublings += 1;
    }

    let k = opts.workers.max(1);
    let mut iterations = 0;
    let mut stalled = false;
    while (hi - lo) > opts.tol * hi && iterations < opts.max_bisections {
        let sigmas: Vec<f64> = (1..=k).map(|i| lo + (hi - lo) * i as f64 / (k + 1) as f64).collect();
        if sigmas.iter().any(|s| *s <= lo || *s >= hi) {
            break;
        }
        let batch = prober.probe_many(&sigmas)?;
        iterations += 1;
        let new_lo = batch
            .iter()
            .filter(|p| p.verdict == Verdict::Vanishing)
            .map(|p| p.sigma)
            .fold(lo, f64::max);
        let new_hi = batch
            .iter()
            .filter(|p| p.verdict == Verdict::Spreading)
            .map(|p| p.sigma)
            .fold(hi, f64::min);
        probes.extend(batch);
        if new_lo == lo && new_hi == hi {
            stalled = true;
            break;
        }
        lo = new_lo;
        hi = new_hi;
        if lo >= hi {
            break;
        }
    }
    Ok(SigmaStarResult {
        lo,
        hi,
        iterations,
        probes,
        stalled,
    })
}

/// Reruns the bracket endpoints to their verdicts (or `t_cap`).
#[allow(clippy::too_many_arguments)]
pub fn bracket_trajectories(
    shape: &Shape,
    h0: f64,
    nl: &Nonlinearity,
    cfg: &SolverConfig,
    mode: Mode,
    result: &SigmaStarResult,
    margins: Margins,
    t_cap: f64,
) -> Result<(Trajectory, Trajectory)> {
    let lo = classify_run(nl, cfg, &shape.with_sigma(result.lo), h0, mode, margins, t_cap)?.1;
    let hi = classify_run(nl, cfg, &shape.with_sigma(result.hi), h0, mode, margins, t_cap)?.1;
    Ok((lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Law {
    Linear,
    Log,
    Sqrt,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SpeedFit {
    pub law: Law,
    pub coefficient: f64,
    pub offset: f64,
    pub window: (f64, f64),
    pub rms: f64,
    pub samples: usize,
}

pub const MIN_FIT_SAMPLES: usize = 200;

/// Least squares of h(t) against c·t + d, c·ln t + d or c·√t on the window.
pub fn fit_speed(traj: &Trajectory, law: Law, window: (f64, f64)) -> Result<SpeedFit> {
    let pts: Vec<(f64, f64)> = traj.samples.iter().map(|s| (s.t, s.h)).collect();
    fit_points(&pts, law, window)
}

/// `fit_speed` on raw (t, h) points; points outside the window are ignored.
pub fn fit_points(pts: &[(f64, f64)], law: Law, window: (f64, f64)) -> Result<SpeedFit> {
    let pts: Vec<(f64, f64)> = pts
        .iter()
        .copied()
        .filter(|(t, _)| *t >= window.0 && *t <= window.1)
        .collect();
    if pts.len() < MIN_FIT_SAMPLES {
        return Err(Error::DegenerateWindow(format!(
            "{} samples in [{}, {}], need {MIN_FIT_SAMPLES}",
            pts.len(),
            window.0,
            window.1
        )));
    }
    let basis = |t: f64| match law {
        Law::Linear => t,
        Law::Log => t.ln(),
        Law::Sqrt => t.sqrt(),
    };
    let n = pts.len() as f64;
    let (c, d) = match law {
        Law::Sqrt => {
            let sxy: f64 = pts.iter().map(|(t, h)| basis(*t) * h).sum();
            let sxx: f64 = pts.iter().map(|(t, _)| basis(*t).powi(2)).sum();
            (sxy / sxx, 0.0)
        }
        _ => {
            let mx = pts.iter().map(|(t, _)| basis(*t)).sum::<f64>() / n;
            let my = pts.iter().map(|(_, h)| h).sum::<f64>() / n;
            let sxy: f64 = pts.iter().map(|(t, h)| (basis(*t) - mx) * (h - my)).sum();
            let sxx: f64 = pts.iter().map(|(t, _)| (basis(*t) - mx).powi(2)).sum();
            if !(sxx > 0.0) {
                return Err(Error::DegenerateWindow("window has no spread in t".into()));
            }
            let c = sxy / sxx;
            (c, my - c * mx)
        }
    };
    let rms = (pts.iter().map(|(t, h)| (h - c * basis(*t) - d).powi(2)).sum::<f64>() / n).sqrt();
    Ok(SpeedFit {
        law,
        coefficient: c,
        offset: d,
        window,
        rms,
        samples: pts.len(),
    })
}

/// Window on which the bracket endpoints still shadow each other:
/// t_b is the last time before |h_lo - h_hi| first exceeds rel_gap·h_hi,
/// t_a = max(10, t_b/10).
pub fn divergence_window(traj_lo: &Trajectory, traj_hi: &Trajectory, rel_gap: f64) -> Result<(f64, f64)> {
    let t_common = traj_lo.t_end().min(traj_hi.t_end());
    let mut t_b = t_common;
    let mut last_ok = None;
    for s in traj_hi.samples.iter().filter(|s| s.t <= t_common) {
        let gap = (traj_lo.h_at(s.t) - s.h).abs();
        if gap > rel_gap * s.h {
            t_b = last_ok.unwrap_or(s.t);
            break;
        }
        last_ok = Some(s.t);
    }
    let t_a = (t_b / 10.0).max(10.0);
    if !(t_b > t_a) {
        return Err(Error::DegenerateWindow(format!(
            "trajectories separate by t = {t_b}; tighten the bracket"
        )));
    }
    Ok((t_a, t_b))
}

/// x₀ minimizing Σ (u(x) - V(x + x₀))² over the nodes.
pub fn fit_shift(state: &FrontState, gs: &GroundState) -> f64 {
    let xs = state.xs();
    let pts: Vec<(f64, f64)> = match state.mode {
        Mode::SymmetricHalf => xs
            .iter()
            .zip(&state.values)
            .flat_map(|(x, u)| [(*x, *u), (-*x, *u)])
            .collect(),
        _ => xs.iter().copied().zip(state.values.iter().copied()).collect(),
    };
    let cost = |x0: f64| pts.iter().map(|(x, u)| (u - gs.value(x + x0)).powi(2)).sum::<f64>();
    let half = 0.5 * (state.h - state.g);
    let scan = 80;
    let mut best = (0.0, f64::INFINITY);
    for i in 0..=scan {
        let x0 = -half + 2.0 * half * i as f64 / scan as f64;
        let c = cost(x0);
        if c < best.1 {
            best = (x0, c);
        }
    }
    let step = 2.0 * half / scan as f64;
    golden_min(cost, best.0 - step, best.0 + step, 1e-9)
}
