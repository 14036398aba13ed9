//! Front-fixing solver for u_t = u_xx + f(u) on (g(t), h(t)) with
//! g' = -μ u_x(t, g), h' = -μ u_x(t, h).
//!
//! With x = g + (y+1)L/2, L = h - g, y ∈ [-1, 1]:
//!   v_t = (4/L²) v_yy + [((1-y) g' + (1+y) h') / L] v_y + f(v).
//! Diffusion and advection are implicit (L-stable two-stage SDIRK), the
//! reaction explicit. Front speeds inside each stage are iterated until they
//! agree with the stage solution; treating advection with lagged speeds costs
//! an order in time. The fronts themselves advance by Heun.

use serde::{Deserialize, Serialize};

use crate::nonlinearity::Nonlinearity;
use crate::numerics::Tridiagonal;
use crate::{Error, Result};

const GAMMA: f64 = 1.0 - std::f64::consts::FRAC_1_SQRT_2;
const UNDERSHOOT: f64 = -1e-10;
const MAX_HALVINGS: usize = 40;
const STAGE_SWEEPS: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// Two free fronts, Dirichlet zero at both ends.
    TwoFront,
    /// Even data on [0, h], Neumann at 0; g is reported as -h.
    SymmetricHalf,
    /// u(t, 0) held at its initial value, single front at h.
    PinnedLeft,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stencil {
    #[serde(rename = "one_sided_2nd")]
    OneSided2nd,
    #[serde(rename = "one_sided_3rd")]
    OneSided3rd,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DtRule {
    Fixed(f64),
    Cfl(f64),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SolverConfig {
    pub n: usize,
    pub mu: f64,
    pub dt_rule: DtRule,
    pub dt_max: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub boundary_stencil: Stencil,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            n: 800,
            mu: 1.0,
            dt_rule: DtRule::Cfl(0.5),
            dt_max: 1.0,
            t_end: 100.0,
            snapshot_stride: 0,
            boundary_stencil: Stencil::OneSided2nd,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n < 64 {
            return Err(Error::config("solver.n", format!("{} < 64", self.n)));
        }
        if !(self.mu >= 0.0) || !self.mu.is_finite() {
            return Err(Error::config("solver.mu", format!("{} must be nonnegative", self.mu)));
        }
        match self.dt_rule {
            DtRule::Fixed(dt) if !(dt > 0.0) => {
                return Err(Error::config("solver.dt", format!("{dt} must be positive")));
            }
            DtRule::Cfl(c) if !(c > 0.0 && c <= 1.0) => {
                return Err(Error::config("solver.cfl", format!("{c} must lie in (0, 1]")));
            }
            _ => {}
        }
        if !(self.dt_max > 0.0) {
            return Err(Error::config(
                "solver.dt_max",
                format!("{} must be positive", self.dt_max),
            ));
        }
        if !(self.t_end >= 0.0) {
            return Err(Error::config(
                "solver.t_end",
                format!("{} must be nonnegative", self.t_end),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct FrontState {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    /// u at y_j = -1 + 2j/N, j = 0..=N.
    pub values: Vec<f64>,
    pub mode: Mode,
}

impl FrontState {
    pub fn n(&self) -> usize {
        self.values.len() - 1
    }

    /// Left end of the computational domain in x.
    pub fn left(&self) -> f64 {
        match self.mode {
            Mode::TwoFront => self.g,
            Mode::SymmetricHalf | Mode::PinnedLeft => 0.0,
        }
    }

    pub fn length(&self) -> f64 {
        self.h - self.left()
    }

    pub fn dx(&self) -> f64 {
        self.length() / self.n() as f64
    }

    pub fn x(&self, j: usize) -> f64 {
        self.left() + self.length() * j as f64 / self.n() as f64
    }

    pub fn xs(&self) -> Vec<f64> {
        (0..=self.n()).map(|j| self.x(j)).collect()
    }

    /// u(t, x) by linear interpolation; even extension in symmetric mode,
    /// zero outside the support.
    pub fn u_at(&self, x: f64) -> f64 {
        let x = match self.mode {
            Mode::SymmetricHalf => x.abs(),
            _ => x,
        };
        let left = self.left();
        if x < left || x > self.h {
            return 0.0;
        }
        let s = (x - left) / self.length() * self.n() as f64;
        let j = (s.floor() as usize).min(self.n() - 1);
        let w = s - j as f64;
        (1.0 - w) * self.values[j] + w * self.values[j + 1]
    }

    pub fn max_u(&self) -> f64 {
        self.values.iter().copied().fold(0.0, f64::max)
    }

    /// ∫ u over the full support (both halves in symmetric mode).
    pub fn mass(&self) -> f64 {
        let dx = self.dx();
        let n = self.n();
        let inner: f64 = self.values[1..n].iter().sum();
        let trap = dx * (inner + 0.5 * (self.values[0] + self.values[n]));
        match self.mode {
            Mode::SymmetricHalf => 2.0 * trap,
            _ => trap,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Sample {
    pub t: f64,
    pub g: f64,
    pub h: f64,
    pub ux_g: f64,
    pub ux_h: f64,
    pub max_u: f64,
    pub u_center: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum StopReason {
    Time,
    Verdict,
    FrontReached,
    Cap,
    Failure,
}

#[derive(Debug, Clone)]
pub struct Trajectory {
    pub samples: Vec<Sample>,
    pub snapshots: Vec<FrontState>,
    pub final_state: FrontState,
    pub stop: StopReason,
    pub failure: Option<String>,
    pub steps: usize,
    pub rejections: usize,
}

impl Trajectory {
    /// Linear interpolation of h at time t (clamped to the sampled range).
    pub fn h_at(&self, t: f64) -> f64 {
        interp_series(&self.samples, t, |s| s.h)
    }

    pub fn g_at(&self, t: f64) -> f64 {
        interp_series(&self.samples, t, |s| s.g)
    }

    pub fn t_end(&self) -> f64 {
        self.samples.last().map_or(0.0, |s| s.t)
    }
}

fn interp_series(samples: &[Sample], t: f64, key: impl Fn(&Sample) -> f64) -> f64 {
    let k = samples.partition_point(|s| s.t <= t);
    if k == 0 {
        return key(&samples[0]);
    }
    if k == samples.len() {
        return key(&samples[k - 1]);
    }
    let (a, b) = (&samples[k - 1], &samples[k]);
    let w = (t - a.t) / (b.t - a.t);
    (1.0 - w) * key(a) + w * key(b)
}

pub enum StopRule<'a> {
    Time(f64),
    /// Stop when the hook returns true, or at the cap.
    Verdict {
        hook: &'a mut dyn FnMut(&FrontState) -> bool,
        t_cap: f64,
    },
    FrontReaches {
        x: f64,
        t_cap: f64,
    },
}

#[derive(Debug, Clone, Copy)]
pub struct StepInfo {
    pub dt: f64,
    pub halvings: usize,
}

/// Initial profile φ on [-h0, h0].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "shape", deny_unknown_fields)]
pub enum Shape {
    /// σ cos(πx / 2h0)
    Cos { sigma: f64 },
    /// σ (1 - (x/h0)²)
    Parabola { sigma: f64 },
    /// σ cos(πx/2h0) (base + left·bump(x + h0/2) + right·bump(x - h0/2)),
    /// bump(s) = exp(-(s/width)²)
    TwoBump {
        sigma: f64,
        base: f64,
        left: f64,
        right: f64,
        width: f64,
    },
    /// σ × tabulated φ on [-h0, h0] (x, value pairs, monotone-cubic interpolation).
    Tabulated { sigma: f64, x: Vec<f64>, value: Vec<f64> },
}

impl Shape {
    pub fn sigma(&self) -> f64 {
        match self {
            Shape::Cos { sigma }
            | Shape::Parabola { sigma }
            | Shape::TwoBump { sigma, .. }
            | Shape::Tabulated { sigma, .. } => *sigma,
        }
    }

    pub fn with_sigma(&self, s: f64) -> Shape {
        let mut out = self.clone();
        match &mut out {
            Shape::Cos { sigma }
            | Shape::Parabola { sigma }
            | Shape::TwoBump { sigma, .. }
            | Shape::Tabulated { sigma, .. } => *sigma = s,
        }
        out
    }

    pub fn is_even(&self) -> bool {
        match self {
            Shape::Cos { .. } | Shape::Parabola { .. } => true,
            Shape::TwoBump { left, right, .. } => left == right,
            Shape::Tabulated { .. } => false,
        }
    }

    pub fn eval(&self, x: f64, h0: f64) -> f64 {
        if x.abs() > h0 {
            return 0.0;
        }
        let c = (std::f64::consts::FRAC_PI_2 * x / h0).cos().max(0.0);
        match self {
            Shape::Cos { sigma } => sigma * c,
            Shape::Parabola { sigma } => sigma * (1.0 - (x / h0).powi(2)),
            Shape::TwoBump {
                sigma,
                base,
                left,
                right,
                width,
            } => {
                let b = |s: f64| (-(s / width).powi(2)).exp();
                sigma * c * (base + left * b(x + 0.5 * h0) + right * b(x - 0.5 * h0))
            }
            Shape::Tabulated { sigma, x: xs, value } => match crate::numerics::Pchip::new(xs.clone(), value.clone()) {
                Some(p) => sigma * p.eval(x),
                None => f64::NAN,
            },
        }
    }
}

pub struct Solver<'a> {
    nl: &'a Nonlinearity,
    cfg: SolverConfig,
    tri: Tridiagonal,
    lower: Vec<f64>,
    diag: Vec<f64>,
    upper: Vec<f64>,
    e1: Vec<f64>,
    e2: Vec<f64>,
    e3: Vec<f64>,
    v2: Vec<f64>,
    v3: Vec<f64>,
    k2: Vec<f64>,
    vn: Vec<f64>,
}

#[derive(Debug, Clone, Copy)]
struct Fronts {
    g: f64,
    h: f64,
}

#[derive(Debug, Clone, Copy)]
struct Speeds {
    gdot: f64,
    hdot: f64,
}

impl<'a> Solver<'a> {
    pub fn new(nl: &'a Nonlinearity, cfg: SolverConfig) -> Result<Self> {
        cfg.validate()?;
        let m = cfg.n + 1;
        Ok(Self {
            nl,
            cfg,
            tri: Tridiagonal::new(),
            lower: vec![0.0; m],
            diag: vec![0.0; m],
            upper: vec![0.0; m],
            e1: vec![0.0; m],
            e2: vec![0.0; m],
            e3: vec![0.0; m],
            v2: vec![0.0; m],
            v3: vec![0.0; m],
            k2: vec![0.0; m],
            vn: vec![0.0; m],
        })
    }

    pub fn config(&self) -> &SolverConfig {
        &self.cfg
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        self.nl
    }

    /// Samples u0 at t = 0 after checking membership in the admissible class.
    pub fn init(&self, u0: &dyn Fn(f64) -> f64, h0: f64, mode: Mode) -> Result<FrontState> {
        self.init_at(u0, h0, mode, 0.0)
    }

    pub fn init_at(&self, u0: &dyn Fn(f64) -> f64, h0: f64, mode: Mode, t0: f64) -> Result<FrontState> {
        if !(h0 > 0.0) || !h0.is_finite() {
            return Err(Error::InvalidInitial(format!("h0 = {h0} must be positive")));
        }
        let n = self.cfg.n;
        let scale = (0..=64)
            .map(|k| u0(-h0 + 2.0 * h0 * k as f64 / 64.0).abs())
            .fold(0.0, f64::max)
            .max(1.0);
        let zero_tol = 1e-10 * scale;
        let eps = 1e-6 * h0;
        let right_slope = (3.0 * u0(h0) - 4.0 * u0(h0 - eps) + u0(h0 - 2.0 * eps)) / (2.0 * eps);
        if u0(h0).abs() > zero_tol {
            return Err(Error::InvalidInitial(format!("u0(h0) = {} is not zero", u0(h0))));
        }
        if !(right_slope < 0.0) {
            return Err(Error::InvalidInitial(format!(
                "slope at h0 is {right_slope}, must be negative"
            )));
        }
        let (left, g) = match mode {
            Mode::TwoFront => {
                let left_slope = (-3.0 * u0(-h0) + 4.0 * u0(-h0 + eps) - u0(-h0 + 2.0 * eps)) / (2.0 * eps);
                if u0(-h0).abs() > zero_tol {
                    return Err(Error::InvalidInitial(format!("u0(-h0) = {} is not zero", u0(-h0))));
                }
                if !(left_slope > 0.0) {
                    return Err(Error::InvalidInitial(format!(
                        "slope at -h0 is {left_slope}, must be positive"
                    )));
                }
                (-h0, -h0)
            }
            Mode::SymmetricHalf => {
                for k in 1..16 {
                    let x = h0 * k as f64 / 16.0;
                    if (u0(x) - u0(-x)).abs() > 1e-12 * scale {
                        return Err(Error::InvalidInitial("symmetric mode needs even data".into()));
                    }
                }
                (0.0, -h0)
            }
            Mode::PinnedLeft => (0.0, 0.0),
        };
        let len = h0 - left;
        let mut values: Vec<f64> = (0..=n).map(|j| u0(left + len * j as f64 / n as f64)).collect();
        values[n] = 0.0;
        if mode == Mode::TwoFront {
            values[0] = 0.0;
        }
        let first_interior = if mode == Mode::TwoFront { 1 } else { 0 };
        if let Some(j) = (first_interior..n).find(|&j| !(values[j] > 0.0)) {
            return Err(Error::InvalidInitial(format!(
                "u0 must be positive inside, got {} at x = {}",
                values[j],
                left + len * j as f64 / n as f64
            )));
        }
        if let Some(v) = values.iter().find(|v| **v > self.nl.u_max()) {
            return Err(Error::InvalidInitial(format!("u0 = {v} exceeds u_max")));
        }
        Ok(FrontState {
            t: t0,
            g,
            h: h0,
            values,
            mode,
        })
    }

    // one-sided slope dv/dy at the right end (≤ 0 by the Hopf sign check)
    fn slope_right(&self, v: &[f64]) -> f64 {
        let n = v.len() - 1;
        let dy = 2.0 / n as f64;
        let s = match self.cfg.boundary_stencil {
            Stencil::OneSided2nd => (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * dy),
            Stencil::OneSided3rd => (11.0 * v[n] - 18.0 * v[n - 1] + 9.0 * v[n - 2] - 2.0 * v[n - 3]) / (6.0 * dy),
        };
        if s <= 0.0 {
            s
        } else {
            ((v[n] - v[n - 1]) / dy).min(0.0)
        }
    }

    fn slope_left(&self, v: &[f64]) -> f64 {
        let n = v.len() - 1;
        let dy = 2.0 / n as f64;
        let s = match self.cfg.boundary_stencil {
            Stencil::OneSided2nd => (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy),
            Stencil::OneSided3rd => (-11.0 * v[0] + 18.0 * v[1] - 9.0 * v[2] + 2.0 * v[3]) / (6.0 * dy),
        };
        if s >= 0.0 {
            s
        } else {
            ((v[1] - v[0]) / dy).max(0.0)
        }
    }

    /// One-sided front slopes u_x(t, g), u_x(t, h) in x units.
    pub fn boundary_flux(&self, state: &FrontState) -> (f64, f64) {
        let scale = 2.0 / state.length();
        let ux_h = self.slope_right(&state.values) * scale;
        let ux_g = match state.mode {
            Mode::TwoFront => self.slope_left(&state.values) * scale,
            Mode::SymmetricHalf => -ux_h,
            Mode::PinnedLeft => {
                let v = &state.values;
                let dy = 2.0 / state.n() as f64;
                (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * dy) * scale
            }
        };
        (ux_g, ux_h)
    }

    fn speeds(&self, v: &[f64], len: f64, mode: Mode) -> Speeds {
        let scale = 2.0 / len;
        let hdot = -self.cfg.mu * self.slope_right(v) * scale;
        let gdot = match mode {
            Mode::TwoFront => -self.cfg.mu * self.slope_left(v) * scale,
            _ => 0.0,
        };
        Speeds { gdot, hdot }
    }

    // reaction at unknown nodes
    fn explicit(&self, v: &[f64], mode: Mode, out: &mut [f64]) {
        let n = v.len() - 1;
        out[n] = 0.0;
        out[0] = match mode {
            Mode::SymmetricHalf => self.nl.f(v[0]),
            _ => 0.0,
        };
        for j in 1..n {
            out[j] = self.nl.f(v[j]);
        }
    }

    // (I - k A) w = rhs, A = (4/L²) ∂_yy + [((1-y) g' + (1+y) h')/L] ∂_y with
    // the given front speeds; boundary rows carry fixed values.
    fn implicit(&mut self, rhs: &mut [f64], len: f64, k: f64, mode: Mode, sp: Speeds) {
        let n = rhs.len() - 1;
        let dy = 2.0 / n as f64;
        let dx = len / n as f64;
        let d = k / (dx * dx);
        let adv = k / (2.0 * dy * len);
        for j in 1..n {
            let y = -1.0 + dy * j as f64;
            let beta = adv * ((1.0 - y) * sp.gdot + (1.0 + y) * sp.hdot);
            self.lower[j] = -(d - beta);
            self.diag[j] = 1.0 + 2.0 * d;
            self.upper[j] = -(d + beta);
        }
        self.lower[n] = 0.0;
        self.diag[n] = 1.0;
        self.upper[n] = 0.0;
        self.lower[0] = 0.0;
        match mode {
            Mode::SymmetricHalf => {
                self.diag[0] = 1.0 + 2.0 * d;
                self.upper[0] = -2.0 * d;
            }
            _ => {
                self.diag[0] = 1.0;
                self.upper[0] = 0.0;
            }
        }
        self.tri.solve(&self.lower, &self.diag, &self.upper, rhs);
    }

    // implicit stage with the speeds refreshed from the stage solution
    fn stage_solve(
        &mut self,
        rhs: &[f64],
        out: &mut [f64],
        len: f64,
        k: f64,
        mode: Mode,
        guess: Speeds,
    ) -> std::result::Result<Speeds, String> {
        let mut sp = guess;
        for _ in 0..STAGE_SWEEPS {
            out.copy_from_slice(rhs);
            self.implicit(out, len, k, mode, sp);
            let next = self.speeds(out, len, mode);
            let change = (next.hdot - sp.hdot).abs().max((next.gdot - sp.gdot).abs());
            sp = next;
            if change <= 1e-13 * (1.0 + sp.hdot.abs().max(sp.gdot.abs())) {
                return Ok(sp);
            }
        }
        Err("front speeds did not settle in the implicit stage".into())
    }

    fn dt_for(&self, state: &FrontState) -> f64 {
        let base = match self.cfg.dt_rule {
            DtRule::Fixed(dt) => dt,
            DtRule::Cfl(c) => {
                let sp = self.speeds(&state.values, state.length(), state.mode);
                let front = sp.gdot.abs().max(sp.hdot.abs());
                let dx = state.dx();
                let react = self.nl.slope_bound((state.max_u() * 1.1).max(1e-3));
                let mut dt = f64::INFINITY;
                if front > 0.0 {
                    dt = dt.min(dx / front);
                }
                if react > 0.0 {
                    dt = dt.min(1.0 / react);
                }
                c * dt
            }
        };
        base.min(self.cfg.dt_max)
    }

    /// Attempts one step of size dt; on success overwrites `state`.
    fn try_step(&mut self, state: &mut FrontState, dt: f64) -> std::result::Result<(), String> {
        let n = state.n();
        let mode = state.mode;
        let left0 = state.left();
        let fr = Fronts { g: state.g, h: state.h };
        let len_of = |f: Fronts| match mode {
            Mode::TwoFront => f.h - f.g,
            _ => f.h - left0,
        };
        let k = GAMMA * dt;
        let v = &state.values;

        let l1 = len_of(fr);
        let s1 = self.speeds(v, l1, mode);
        let mut e1 = std::mem::take(&mut self.e1);
        self.explicit(v, mode, &mut e1);

        let fr2 = Fronts {
            g: fr.g + k * s1.gdot,
            h: fr.h + k * s1.hdot,
        };
        let l2 = len_of(fr2);
        let mut rhs = std::mem::take(&mut self.k2);
        for j in 0..=n {
            rhs[j] = v[j] + k * e1[j];
        }
        rhs[n] = 0.0;
        if mode != Mode::SymmetricHalf {
            rhs[0] = v[0];
        }
        let mut v2 = std::mem::take(&mut self.v2);
        let s2 = self.stage_solve(&rhs, &mut v2, l2, k, mode, s1);
        let s2 = match s2 {
            Ok(sp) => sp,
            Err(e) => {
                self.e1 = e1;
                self.k2 = rhs;
                self.v2 = v2;
                return Err(e);
            }
        };
        // K2 = A v2, stored in place of the stage right-hand side
        let mut k2 = rhs;
        for j in 0..=n {
            k2[j] = (v2[j] - k2[j]) / k;
        }
        let mut e2 = std::mem::take(&mut self.e2);
        self.explicit(&v2, mode, &mut e2);

        let fr3 = Fronts {
            g: fr.g + dt * s2.gdot,
            h: fr.h + dt * s2.hdot,
        };
        let l3 = len_of(fr3);
        let mut rhs3 = std::mem::take(&mut self.e3);
        for j in 0..=n {
            rhs3[j] = v[j] + dt * e2[j] + (1.0 - GAMMA) * dt * k2[j];
        }
        rhs3[n] = 0.0;
        if mode != Mode::SymmetricHalf {
            rhs3[0] = v[0];
        }
        let mut v3 = std::mem::take(&mut self.v3);
        let s3 = match self.stage_solve(&rhs3, &mut v3, l3, k, mode, s2) {
            Ok(sp) => sp,
            Err(e) => {
                self.e1 = e1;
                self.e2 = e2;
                self.e3 = rhs3;
                self.k2 = k2;
                self.v2 = v2;
                self.v3 = v3;
                return Err(e);
            }
        };
        let mut e3 = rhs3;
        self.explicit(&v3, mode, &mut e3);

        let g_new = fr.g + 0.5 * dt * (s1.gdot + s3.gdot);
        let h_new = fr.h + 0.5 * dt * (s1.hdot + s3.hdot);
        let mut outcome = Ok(());
        let mut new_vals = std::mem::take(&mut self.vn);
        new_vals.resize(n + 1, 0.0);
        for j in 0..=n {
            new_vals[j] = v3[j] + dt * (0.5 * e1[j] + 0.5 * e3[j] - e2[j]);
        }
        new_vals[n] = 0.0;
        if mode != Mode::SymmetricHalf {
            new_vals[0] = v[0];
        }
        let new_len = match mode {
            Mode::TwoFront => h_new - g_new,
            _ => h_new - left0,
        };
        if !(new_len > 0.0) || !h_new.is_finite() || !g_new.is_finite() {
            outcome = Err(format!("front collapse, h - g = {new_len}"));
        } else if let Some(bad) = new_vals.iter().find(|u| !u.is_finite() || **u < UNDERSHOOT) {
            outcome = Err(format!("undershoot {bad}"));
        } else if let Some(bad) = new_vals.iter().find(|u| **u > self.nl.u_max()) {
            outcome = Err(format!("value {bad} above u_max"));
        }

        self.e1 = e1;
        self.e2 = e2;
        self.e3 = e3;
        self.v2 = v2;
        self.v3 = v3;
        self.k2 = k2;

        if let Err(e) = outcome {
            self.vn = new_vals;
            return Err(e);
        }
        for u in new_vals.iter_mut() {
            if *u < 0.0 {
                *u = 0.0;
            }
        }
        self.vn = std::mem::replace(&mut state.values, new_vals);
        state.t += dt;
        state.h = h_new;
        state.g = match mode {
            Mode::TwoFront => g_new,
            Mode::SymmetricHalf => -h_new,
            Mode::PinnedLeft => 0.0,
        };
        Ok(())
    }

    /// One step with the configured dt rule, capped so as not to pass `t_stop`.
    pub fn step_until(&mut self, state: &mut FrontState, t_stop: f64) -> Result<StepInfo> {
        let remaining = t_stop - state.t;
        let mut dt = self.dt_for(state).min(remaining);
        if !(dt > 0.0) {
            return Err(Error::StepFailure {
                t: state.t,
                reason: format!("nonpositive step {dt}"),
            });
        }
        let mut last = String::new();
        for halvings in 0..=MAX_HALVINGS {
            match self.try_step(state, dt) {
                Ok(()) => {
                    if dt == remaining {
                        state.t = t_stop;
                    }
                    return Ok(StepInfo { dt, halvings });
                }
                Err(reason) => {
                    last = reason;
                    dt *= 0.5;
                }
            }
        }
        Err(Error::StepFailure {
            t: state.t,
            reason: format!("rejected after {MAX_HALVINGS} halvings: {last}"),
        })
    }

    /// Steps until `state.t` reaches `t` exactly.
    pub fn advance_to(&mut self, state: &mut FrontState, t: f64) -> Result<usize> {
        let mut steps = 0;
        while state.t < t {
            self.step_until(state, t)?;
            steps += 1;
        }
        Ok(steps)
    }

    pub fn step(&mut self, state: &mut FrontState) -> Result<StepInfo> {
        self.step_until(state, f64::INFINITY)
    }

    pub fn sample(&self, state: &FrontState) -> Sample {
        let (ux_g, ux_h) = self.boundary_flux(state);
        Sample {
            t: state.t,
            g: state.g,
            h: state.h,
            ux_g,
            ux_h,
            max_u: state.max_u(),
            u_center: state.u_at(0.0),
        }
    }

    pub fn run(&mut self, state: FrontState, stop: StopRule<'_>) -> Trajectory {
        self.run_with_frames(state, stop, &[]).0
    }

    /// As `run`, also returning states at the requested increasing times,
    /// linearly interpolated in time between accepted steps so the step
    /// sequence is the same as without frames. Frames past the stop are dropped.
    pub fn run_with_frames(
        &mut self,
        state: FrontState,
        mut stop: StopRule<'_>,
        frame_times: &[f64],
    ) -> (Trajectory, Vec<FrontState>) {
        let mut state = state;
        let mut frames = Vec::with_capacity(frame_times.len());
        let t_start = state.t;
        let mut pending = frame_times.iter().copied().skip_while(move |&t| t < t_start).peekable();
        while let Some(&t) = pending.peek() {
            if t > state.t {
                break;
            }
            frames.push(state.clone());
            pending.next();
        }
        let t_stop = match &stop {
            StopRule::Time(t) => *t,
            StopRule::Verdict { t_cap, .. } | StopRule::FrontReaches { t_cap, .. } => *t_cap,
        };
        let mut samples = vec![self.sample(&state)];
        let mut snapshots = Vec::new();
        let stride = self.cfg.snapshot_stride;
        if stride > 0 {
            snapshots.push(state.clone());
        }
        let mut steps = 0;
        let mut rejections = 0;
        let mut failure = None;
        let reason = loop {
            match &mut stop {
                StopRule::Verdict { hook, .. } => {
                    if hook(&state) {
                        break StopReason::Verdict;
                    }
                }
                StopRule::FrontReaches { x, .. } => {
                    if state.h >= *x {
                        break StopReason::FrontReached;
                    }
                }
                StopRule::Time(_) => {}
            }
            if state.t >= t_stop * (1.0 - 1e-15) {
                break match stop {
                    StopRule::Time(_) => StopReason::Time,
                    _ => StopReason::Cap,
                };
            }
            let prev = pending.peek().map(|_| state.clone());
            match self.step_until(&mut state, t_stop) {
                Ok(info) => {
                    if let Some(prev) = prev {
                        while let Some(&t) = pending.peek() {
                            if t > state.t {
                                break;
                            }
                            frames.push(interpolate_states(&prev, &state, t));
                            pending.next();
                        }
                    }
                    steps += 1;
                    rejections += info.halvings;
                    samples.push(self.sample(&state));
                    if stride > 0 && steps % stride == 0 {
                        snapshots.push(state.clone());
                    }
                }
                Err(e) => {
                    failure = Some(e.to_string());
                    break StopReason::Failure;
                }
            }
        };
        let traj = Trajectory {
            samples,
            snapshots,
            final_state: state,
            stop: reason,
            failure,
            steps,
            rejections,
        };
        (traj, frames)
    }
}

/// Linear interpolation in time of two states on the same computational grid.
fn interpolate_states(a: &FrontState, b: &FrontState, t: f64) -> FrontState {
    let w = if b.t > a.t { (t - a.t) / (b.t - a.t) } else { 1.0 };
    let mix = |p: f64, q: f64| (1.0 - w) * p + w * q;
    FrontState {
        t,
        g: mix(a.g, b.g),
        h: mix(a.h, b.h),
        values: a.values.iter().zip(&b.values).map(|(p, q)| mix(*p, *q)).collect(),
        mode: a.mode,
    }
}

/// x ∈ (0, h) where u crosses θ going right from the origin; None when u(t,0) ≤ θ.
pub fn theta_level(state: &FrontState, theta: f64) -> Option<f64> {
    if state.u_at(0.0) <= theta {
        return None;
    }
    let n = state.n();
    let mut prev_x = 0.0;
    let mut prev_u = state.u_at(0.0);
    for j in 0..=n {
        let x = state.x(j);
        if x <= 0.0 {
            continue;
        }
        let u = state.values[j];
        if u <= theta {
            let w = (prev_u - theta) / (prev_u - u);
            return Some(prev_x + w * (x - prev_x));
        }
        prev_x = x;
        prev_u = u;
    }
    None
}
