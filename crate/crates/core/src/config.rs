//! Run configuration: one TOML file per experiment.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::classify::{Law, Margins, SigmaStarOptions};
use crate::fb_solver::{DtRule, Mode, Shape, SolverConfig, Stencil};
use crate::nonlinearity::{make_builtin, Kind, Nonlinearity};
use crate::zeronum::ZeroOptions;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    Simulate,
    Classify,
    SigmaStar,
    Semiwave,
    Xi0,
    Groundstate,
    Bump,
    FitSpeed,
    Zeronum,
    StefanCheck,
    BarrierCheck,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 11] = [
        ExperimentKind::Simulate,
        ExperimentKind::Classify,
        ExperimentKind::SigmaStar,
        ExperimentKind::Semiwave,
        ExperimentKind::Xi0,
        ExperimentKind::Groundstate,
        ExperimentKind::Bump,
        ExperimentKind::FitSpeed,
        ExperimentKind::Zeronum,
        ExperimentKind::StefanCheck,
        ExperimentKind::BarrierCheck,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::Simulate => "simulate",
            ExperimentKind::Classify => "classify",
            ExperimentKind::SigmaStar => "sigma-star",
            ExperimentKind::Semiwave => "semiwave",
            ExperimentKind::Xi0 => "xi0",
            ExperimentKind::Groundstate => "groundstate",
            ExperimentKind::Bump => "bump",
            ExperimentKind::FitSpeed => "fit-speed",
            ExperimentKind::Zeronum => "zeronum",
            ExperimentKind::StefanCheck => "stefan-check",
            ExperimentKind::BarrierCheck => "barrier-check",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.name() == s)
    }
}

impl std::fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Builtin by kind and parameter, or a table when `u` and `f` are given.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NonlinearitySpec {
    pub kind: Kind,
    /// Cubic zero a for bistable, θ for combustion, declared θ for tables.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(default = "default_u_max")]
    pub u_max: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub u: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<Vec<f64>>,
}

fn default_u_max() -> f64 {
    2.0
}

impl NonlinearitySpec {
    pub fn builtin(kind: Kind, theta: Option<f64>) -> Self {
        Self {
            kind,
            theta,
            u_max: default_u_max(),
            delta: None,
            u: None,
            f: None,
        }
    }

    pub fn build(&self) -> Result<Nonlinearity> {
        let wrap = |e: Error| match e {
            Error::InvalidNonlinearity(m) => Error::config("nonlinearity", m),
            other => other,
        };
        match (&self.u, &self.f) {
            (Some(u), Some(f)) => {
                Nonlinearity::tabulated(self.kind, self.theta, self.delta, u.clone(), f.clone(), self.u_max)
                    .map_err(wrap)
            }
            (None, None) => {
                if !(self.u_max > 1.0) {
                    return Err(Error::config(
                        "nonlinearity.u_max",
                        format!("{} must exceed 1", self.u_max),
                    ));
                }
                let nl = make_builtin(self.kind, self.theta).map_err(wrap)?;
                Ok(if self.u_max == nl.u_max() {
                    nl
                } else {
                    nl.with_u_max(self.u_max)
                })
            }
            _ => Err(Error::config("nonlinearity", "tables need both `u` and `f`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SolverSection {
    pub n: usize,
    pub dt_rule: DtRule,
    pub dt_max: f64,
    pub t_end: f64,
    pub snapshot_stride: usize,
    pub boundary_stencil: Stencil,
    /// Default: symmetric_half for even shapes, two_front otherwise.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<Mode>,
    /// Fail-safe horizon for verdict runs.
    pub t_cap: f64,
}

impl Default for SolverSection {
    fn default() -> Self {
        let s = SolverConfig::default();
        Self {
            n: s.n,
            dt_rule: s.dt_rule,
            dt_max: s.dt_max,
            t_end: s.t_end,
            snapshot_stride: s.snapshot_stride,
            boundary_stencil: s.boundary_stencil,
            mode: None,
            t_cap: 5000.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub semiwave: f64,
    /// Relative σ* bracket width.
    pub sigma_star: f64,
    pub margin_up: f64,
    pub margin_down: f64,
    /// Relative front gap that ends the divergence window.
    pub rel_gap: f64,
    pub zero_rel: f64,
    pub zero_slope: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            semiwave: 1e-10,
            sigma_star: 1e-6,
            margin_up: 0.05,
            margin_down: 0.05,
            rel_gap: 0.01,
            zero_rel: 1e-7,
            zero_slope: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SigmaStarSection {
    pub sigma_init: f64,
    /// Probe threads; FRONTLAB_WORKERS applies when absent.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    pub max_doublings: usize,
    pub max_bisections: usize,
}

impl Default for SigmaStarSection {
    fn default() -> Self {
        Self {
            sigma_init: 1.0,
            workers: None,
            max_doublings: 60,
            max_bisections: 60,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct FitSection {
    pub law: Law,
}

impl Default for FitSection {
    fn default() -> Self {
        Self { law: Law::Log }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BumpSection {
    pub b: f64,
}

impl Default for BumpSection {
    fn default() -> Self {
        Self { b: 0.01 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct BarrierSection {
    /// Lower-barrier constant; default 2λ₀²/μ.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m: Option<f64>,
    /// Upper-barrier constant; default λ₀²/(4μ).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub m1: Option<f64>,
    pub t0: f64,
    pub t_max: f64,
    pub x_max: f64,
    pub nx: usize,
}

impl Default for BarrierSection {
    fn default() -> Self {
        Self {
            m: None,
            m1: None,
            t0: 1.0,
            t_max: 1e6,
            x_max: 60.0,
            nx: 600,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StefanSection {
    pub theta: f64,
    pub t0: f64,
    pub t_end: f64,
    pub n_list: Vec<usize>,
}

impl Default for StefanSection {
    fn default() -> Self {
        Self {
            theta: 0.5,
            t0: 1.0,
            t_end: 100.0,
            n_list: vec![400, 800, 1600],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ZeronumSection {
    pub frames: usize,
    /// With a second shape the series follows u(shape) - u(other);
    /// otherwise the reflection difference of the run.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub other: Option<Shape>,
}

impl Default for ZeronumSection {
    fn default() -> Self {
        Self {
            frames: 200,
            other: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out_dir: Option<String>,
    #[serde(default = "one")]
    pub h0: f64,
    #[serde(default = "one")]
    pub mu: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub nonlinearity: Option<NonlinearitySpec>,
    #[serde(default = "default_shape")]
    pub shape: Shape,
    #[serde(default)]
    pub solver: SolverSection,
    #[serde(default)]
    pub tolerances: Tolerances,
    #[serde(default)]
    pub sigma_star: SigmaStarSection,
    #[serde(default)]
    pub fit: FitSection,
    #[serde(default)]
    pub bump: BumpSection,
    #[serde(default)]
    pub barrier: BarrierSection,
    #[serde(default)]
    pub stefan: StefanSection,
    #[serde(default)]
    pub zeronum: ZeronumSection,
}

fn one() -> f64 {
    1.0
}

fn default_shape() -> Shape {
    Shape::Cos { sigma: 1.0 }
}

pub const WORKERS_ENV: &str = "FRONTLAB_WORKERS";

impl RunConfig {
    pub fn new(kind: ExperimentKind) -> Self {
        toml::from_str(&format!("kind = \"{}\"", kind.name())).expect("defaults parse")
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        positive("h0", self.h0)?;
        positive("mu", self.mu)?;
        let s = &self.solver;
        if s.n < 64 {
            return Err(Error::config("solver.n", format!("{} < 64", s.n)));
        }
        match s.dt_rule {
            DtRule::Fixed(dt) => positive("solver.dt_rule.fixed", dt)?,
            DtRule::Cfl(c) if !(c > 0.0 && c <= 1.0) => {
                return Err(Error::config("solver.dt_rule.cfl", format!("{c} must lie in (0, 1]")));
            }
            DtRule::Cfl(_) => {}
        }
        positive("solver.dt_max", s.dt_max)?;
        positive("solver.t_end", s.t_end)?;
        positive("solver.t_cap", s.t_cap)?;
        let t = &self.tolerances;
        positive("tolerances.semiwave", t.semiwave)?;
        if !(t.sigma_star >= 1e-12 && t.sigma_star < 1.0) {
            return Err(Error::config(
                "tolerances.sigma_star",
                format!("{} must lie in [1e-12, 1)", t.sigma_star),
            ));
        }
        nonneg("tolerances.margin_up", t.margin_up)?;
        nonneg("tolerances.margin_down", t.margin_down)?;
        positive("tolerances.rel_gap", t.rel_gap)?;
        nonneg("tolerances.zero_rel", t.zero_rel)?;
        nonneg("tolerances.zero_slope", t.zero_slope)?;
        positive("sigma_star.sigma_init", self.sigma_star.sigma_init)?;
        if self.sigma_star.workers == Some(0) {
            return Err(Error::config("sigma_star.workers", "must be at least 1"));
        }
        positive("bump.b", self.bump.b)?;
        let b = &self.barrier;
        if let Some(m) = b.m {
            positive("barrier.m", m)?;
        }
        if let Some(m1) = b.m1 {
            positive("barrier.m1", m1)?;
        }
        positive("barrier.t0", b.t0)?;
        if !(b.t_max > b.t0) {
            return Err(Error::config("barrier.t_max", "must exceed barrier.t0"));
        }
        positive("barrier.x_max", b.x_max)?;
        if b.nx < 2 {
            return Err(Error::config("barrier.nx", "needs at least 2 points"));
        }
        let st = &self.stefan;
        if !(st.theta > 0.0 && st.theta < 1.0) {
            return Err(Error::config(
                "stefan.theta",
                format!("{} must lie in (0, 1)", st.theta),
            ));
        }
        positive("stefan.t0", st.t0)?;
        if !(st.t_end > st.t0) {
            return Err(Error::config("stefan.t_end", "must exceed stefan.t0"));
        }
        if st.n_list.is_empty() || st.n_list.iter().any(|&n| n < 64) {
            return Err(Error::config("stefan.n_list", "needs node counts of at least 64"));
        }
        if self.zeronum.frames < 2 {
            return Err(Error::config("zeronum.frames", "needs at least 2 frames"));
        }
        if let Some(nl) = &self.nonlinearity {
            positive("nonlinearity.u_max", nl.u_max)?;
            if let Some(th) = nl.theta {
                if !(th > 0.0 && th < 1.0) {
                    return Err(Error::config("nonlinearity.theta", format!("{th} must lie in (0, 1)")));
                }
            }
        }
        if self.shape.sigma() <= 0.0 || !self.shape.sigma().is_finite() {
            return Err(Error::config("shape.sigma", "must be positive"));
        }
        Ok(())
    }

    pub fn nonlinearity(&self) -> Result<Nonlinearity> {
        self.nonlinearity
            .as_ref()
            .ok_or_else(|| Error::config("nonlinearity", format!("required by `{}`", self.kind)))?
            .build()
    }

    pub fn solver_config(&self) -> SolverConfig {
        let s = &self.solver;
        SolverConfig {
            n: s.n,
            mu: self.mu,
            dt_rule: s.dt_rule,
            dt_max: s.dt_max,
            t_end: s.t_end,
            snapshot_stride: s.snapshot_stride,
            boundary_stencil: s.boundary_stencil,
        }
    }

    pub fn mode(&self) -> Mode {
        self.solver
            .mode
            .unwrap_or_else(|| crate::classify::default_mode(&self.shape))
    }

    pub fn margins(&self) -> Margins {
        Margins {
            up: self.tolerances.margin_up,
            down: self.tolerances.margin_down,
        }
    }

    pub fn zero_options(&self) -> ZeroOptions {
        ZeroOptions {
            rel_tol: self.tolerances.zero_rel,
            slope_tol: self.tolerances.zero_slope,
        }
    }

    /// Worker count: config key, then the environment, then 1.
    pub fn workers(&self) -> usize {
        self.sigma_star
            .workers
            .or_else(|| std::env::var(WORKERS_ENV).ok()?.parse().ok())
            .filter(|&w| w > 0)
            .unwrap_or(1)
    }

    pub fn sigma_star_options(&self) -> SigmaStarOptions {
        SigmaStarOptions {
            tol: self.tolerances.sigma_star,
            t_cap: self.solver.t_cap,
            sigma_init: self.sigma_star.sigma_init,
            max_doublings: self.sigma_star.max_doublings,
            max_bisections: self.sigma_star.max_bisections,
            workers: self.workers(),
            margins: self.margins(),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} must be positive")))
    }
}

fn nonneg(field: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::config(field, format!("{v} must be nonnegative")))
    }
}

pub fn parse_str(text: &str) -> Result<RunConfig> {
    let cfg: RunConfig = toml::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    cfg.validate()?;
    Ok(cfg)
}

pub fn parse_config(path: &Path) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)?;
    parse_str(&text)
}
