//! Reaction terms f(u), their class checks and the potentials built from them.

use serde::{Deserialize, Serialize};

use crate::numerics::{GaussLegendre, Pchip};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Monostable,
    Bistable,
    Combustion,
    Custom,
}

impl std::fmt::Display for Kind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            Kind::Monostable => "monostable",
            Kind::Bistable => "bistable",
            Kind::Combustion => "combustion",
            Kind::Custom => "custom",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Reaction {
    Zero,
    /// u(1-u)
    Logistic,
    /// u(1-u)(u-a)
    Cubic {
        a: f64,
    },
    /// (u-θ)²(1-u) above θ, zero below
    CombustionQuadratic {
        theta: f64,
    },
    Tabulated(Pchip),
}

const FD_STEP: f64 = 1e-6;
const ENVELOPE_BINS: usize = 1024;

#[derive(Debug, Clone)]
pub struct Nonlinearity {
    kind: Kind,
    theta: Option<f64>,
    u_max: f64,
    delta: Option<f64>,
    alpha: Option<f64>,
    reaction: Reaction,
    // running max of |f'| over [0, u] sampled on ENVELOPE_BINS bins
    envelope: Vec<f64>,
    peak_slope: f64,
}

impl Nonlinearity {
    /// Builds without running the class checks.
    pub fn unchecked(kind: Kind, theta: Option<f64>, reaction: Reaction, u_max: f64) -> Self {
        let mut nl = Self {
            kind,
            theta,
            u_max,
            delta: None,
            alpha: None,
            reaction,
            envelope: Vec::new(),
            peak_slope: 0.0,
        };
        nl.delta = match (&nl.reaction, kind) {
            (Reaction::CombustionQuadratic { theta }, _) => Some((2.0 - 2.0 * theta) / 3.0),
            _ => None,
        };
        nl.build_envelope();
        nl
    }

    pub fn bistable_cubic(a: f64) -> Result<Self> {
        if !(a > 0.0 && a < 1.0) {
            return Err(Error::InvalidNonlinearity(format!(
                "cubic zero a = {a} must lie in (0, 1)"
            )));
        }
        let mut nl = Self::unchecked(Kind::Bistable, Some(a), Reaction::Cubic { a }, 2.0);
        nl.alpha = Some(1.0);
        nl.checked()
    }

    pub fn combustion(theta: f64) -> Result<Self> {
        if !(theta > 0.0 && theta < 1.0) {
            return Err(Error::InvalidNonlinearity(format!(
                "theta = {theta} must lie in (0, 1)"
            )));
        }
        let mut nl = Self::unchecked(
            Kind::Combustion,
            Some(theta),
            Reaction::CombustionQuadratic { theta },
            2.0,
        );
        nl.alpha = Some(1.0);
        nl.checked()
    }

    pub fn logistic() -> Self {
        let mut nl = Self::unchecked(Kind::Monostable, None, Reaction::Logistic, 2.0);
        nl.alpha = Some(1.0);
        nl
    }

    /// f ≡ 0, used for pure heat and Stefan runs.
    pub fn zero() -> Self {
        Self::unchecked(Kind::Custom, None, Reaction::Zero, 2.0)
    }

    /// Tabulated reaction with monotone-cubic interpolation, checked against
    /// the declared class.
    pub fn tabulated(
        kind: Kind,
        theta: Option<f64>,
        delta: Option<f64>,
        u: Vec<f64>,
        f: Vec<f64>,
        u_max: f64,
    ) -> Result<Self> {
        if !(u_max > 1.0) {
            return Err(Error::InvalidNonlinearity(format!("u_max = {u_max} must exceed 1")));
        }
        if u.first().copied() != Some(0.0) {
            return Err(Error::InvalidNonlinearity("table must start at u = 0".into()));
        }
        if u.last().is_none_or(|&l| l < u_max) {
            return Err(Error::InvalidNonlinearity("table must cover [0, u_max]".into()));
        }
        let p = Pchip::new(u, f).ok_or_else(|| {
            Error::InvalidNonlinearity("table needs matching, finite, strictly increasing knots".into())
        })?;
        let mut nl = Self::unchecked(kind, theta, Reaction::Tabulated(p), u_max);
        nl.delta = delta;
        nl.checked()
    }

    fn checked(self) -> Result<Self> {
        let report = validate_class(&self, 1000);
        if report.passed() {
            Ok(self)
        } else {
            Err(Error::InvalidNonlinearity(report.failures().join("; ")))
        }
    }

    pub fn with_u_max(mut self, u_max: f64) -> Self {
        self.u_max = u_max;
        self.build_envelope();
        self
    }

    fn build_envelope(&mut self) {
        let mut env = Vec::with_capacity(ENVELOPE_BINS + 1);
        let mut running: f64 = 0.0;
        for i in 0..=ENVELOPE_BINS {
            let u = self.u_max * i as f64 / ENVELOPE_BINS as f64;
            running = running.max(self.f_prime(u).abs());
            env.push(running);
        }
        self.envelope = env;
        self.peak_slope = (0..=1000)
            .map(|i| self.f_prime(i as f64 / 1000.0))
            .fold(f64::NEG_INFINITY, f64::max);
    }

    pub fn kind(&self) -> Kind {
        self.kind
    }

    pub fn theta(&self) -> Option<f64> {
        self.theta
    }

    pub fn u_max(&self) -> f64 {
        self.u_max
    }

    pub fn delta(&self) -> Option<f64> {
        self.delta
    }

    /// Hölder exponent of f' near 0, recorded but never verified.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    pub fn reaction(&self) -> &Reaction {
        &self.reaction
    }

    #[inline]
    pub fn f(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Zero => 0.0,
            Reaction::Logistic => u * (1.0 - u),
            Reaction::Cubic { a } => u * (1.0 - u) * (u - a),
            Reaction::CombustionQuadratic { theta } => {
                if u <= *theta {
                    0.0
                } else {
                    let w = u - theta;
                    w * w * (1.0 - u)
                }
            }
            Reaction::Tabulated(p) => p.eval(u),
        }
    }

    pub fn f_prime(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Zero => 0.0,
            Reaction::Logistic => 1.0 - 2.0 * u,
            Reaction::Cubic { a } => -3.0 * u * u + 2.0 * (1.0 + a) * u - a,
            Reaction::CombustionQuadratic { theta } => {
                if u <= *theta {
                    0.0
                } else {
                    (u - theta) * (2.0 + theta - 3.0 * u)
                }
            }
            Reaction::Tabulated(_) => (self.f(u + FD_STEP) - self.f(u - FD_STEP)) / (2.0 * FD_STEP),
        }
    }

    /// max |f'| over [0, u] (bin resolution, rounded up).
    pub fn slope_bound(&self, u: f64) -> f64 {
        let r = (u / self.u_max).clamp(0.0, 1.0) * ENVELOPE_BINS as f64;
        let i = (r.ceil() as usize).min(ENVELOPE_BINS);
        self.envelope[i] * 1.001
    }

    /// max of f' over [0, 1].
    pub fn peak_slope(&self) -> f64 {
        self.peak_slope
    }

    /// ∫_a^b f, accurate also when a and b are close.
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        match &self.reaction {
            Reaction::Zero => 0.0,
            Reaction::Tabulated(p) => p.integral(a, b),
            Reaction::CombustionQuadratic { theta } => {
                let lo = a.max(*theta);
                if b <= lo {
                    0.0
                } else {
                    GaussLegendre::local().integrate(|u| self.f(u), lo, b)
                }
            }
            _ => GaussLegendre::local().integrate(|u| self.f(u), a, b),
        }
    }

    /// ∫ f over [top - d, top], taking the width d itself so that widths
    /// below the resolution of `top` do not round to zero.
    pub fn integral_below(&self, top: f64, d: f64) -> f64 {
        if d > 1e-4 * top.abs().max(1.0) {
            self.integral(top - d, top)
        } else {
            GaussLegendre::local().integrate(|r| self.f(top - r), 0.0, d)
        }
    }

    /// F(u) = -2 ∫_0^u f.
    pub fn potential_f(&self, u: f64) -> f64 {
        match &self.reaction {
            Reaction::Zero => 0.0,
            Reaction::Logistic => -u * u + 2.0 * u * u * u / 3.0,
            Reaction::Cubic { a } => {
                let u2 = u * u;
                0.5 * u2 * u2 - 2.0 * (1.0 + a) * u2 * u / 3.0 + a * u2
            }
            Reaction::CombustionQuadratic { theta } => {
                if u <= *theta {
                    0.0
                } else {
                    -combustion_g(*theta, u - theta)
                }
            }
            Reaction::Tabulated(p) => -2.0 * p.integral(0.0, u),
        }
    }

    /// G(u) = 2 ∫_0^u f(s+θ) ds, combustion only.
    pub fn shifted_potential_g(&self, u: f64) -> Result<f64> {
        if self.kind != Kind::Combustion {
            return Err(Error::NotApplicable(format!(
                "G is defined for combustion, not {}",
                self.kind
            )));
        }
        let theta = self.theta.expect("combustion carries theta");
        Ok(match &self.reaction {
            Reaction::CombustionQuadratic { theta } => combustion_g(*theta, u),
            _ => 2.0 * self.integral(theta, theta + u),
        })
    }

    /// [-f'(0)]^{-1/2}.
    pub fn lambda0(&self) -> Result<f64> {
        let d = self.f_prime(0.0);
        if d < 0.0 {
            Ok((-d).powf(-0.5))
        } else {
            Err(Error::NotApplicable(format!("f'(0) = {d} is not negative")))
        }
    }
}

fn combustion_g(theta: f64, u: f64) -> f64 {
    let u3 = u * u * u;
    2.0 * ((1.0 - theta) * u3 / 3.0 - u3 * u / 4.0)
}

/// Canonical fixtures: bistable cubic (param = a, default 0.25), combustion
/// (param = θ, default 0.5), monostable logistic (param ignored).
pub fn make_builtin(kind: Kind, param: Option<f64>) -> Result<Nonlinearity> {
    match kind {
        Kind::Bistable => Nonlinearity::bistable_cubic(param.unwrap_or(0.25)),
        Kind::Combustion => Nonlinearity::combustion(param.unwrap_or(0.5)),
        Kind::Monostable => Ok(Nonlinearity::logistic()),
        Kind::Custom => Err(Error::InvalidNonlinearity("custom kinds need a table".into())),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub worst_violation: f64,
}

#[derive(Debug, Clone, Default, Serialize)]
pub struct ValidationReport {
    pub kind: Option<Kind>,
    pub theta: Option<f64>,
    pub checks: Vec<Check>,
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> Vec<String> {
        self.checks
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("{} (worst violation {:.3e})", c.name, c.worst_violation))
            .collect()
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    fn push(&mut self, name: &str, passed: bool, worst: f64) {
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            worst_violation: worst,
        });
    }
}

struct Samples {
    u: Vec<f64>,
    f: Vec<f64>,
}

impl Samples {
    fn open(&self, lo: f64, hi: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.u
            .iter()
            .zip(&self.f)
            .filter(move |(u, _)| **u > lo && **u < hi)
            .map(|(u, f)| (*u, *f))
    }

    // (all f < 0 on the open interval, worst value of max(f, 0))
    fn negative(&self, lo: f64, hi: f64) -> (bool, f64) {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for (_, f) in self.open(lo, hi) {
            if !(f < 0.0) {
                ok = false;
                worst = worst.max(f);
            }
        }
        (ok, worst)
    }

    fn positive(&self, lo: f64, hi: f64) -> (bool, f64) {
        let mut ok = true;
        let mut worst: f64 = 0.0;
        for (_, f) in self.open(lo, hi) {
            if !(f > 0.0) {
                ok = false;
                worst = worst.max(-f);
            }
        }
        (ok, worst)
    }
}

const ZERO_TOL: f64 = 1e-14;

/// Sampled sign checks of the class conditions on `grid_points` uniform
/// points of [0, u_max].
pub fn validate_class(nl: &Nonlinearity, grid_points: usize) -> ValidationReport {
    let n = grid_points.max(2);
    let u: Vec<f64> = (0..n).map(|i| nl.u_max * i as f64 / (n - 1) as f64).collect();
    let f: Vec<f64> = u.iter().map(|&v| nl.f(v)).collect();
    let s = Samples { u, f };
    let mut r = ValidationReport {
        kind: Some(nl.kind),
        theta: nl.theta,
        ..Default::default()
    };
    if n < 1000 {
        r.notes
            .push(format!("grid of {n} points is below the recommended 1000"));
    }

    let f0 = nl.f(0.0).abs();
    r.push("f(0) = 0", f0 <= ZERO_TOL, f0);

    match nl.kind {
        Kind::Bistable => {
            let theta = nl.theta.or_else(|| detect_bistable_theta(&s));
            let Some(theta) = theta.filter(|t| *t > 0.0 && *t < 1.0) else {
                r.push("interior zero theta in (0,1)", false, 0.0);
                return r;
            };
            r.theta = Some(theta);
            let ft = nl.f(theta).abs();
            r.push("f(theta) = 0", ft <= 1e-12, ft);
            let f1 = nl.f(1.0).abs();
            r.push("f(1) = 0", f1 <= 1e-12, f1);
            let (ok, w) = s.negative(0.0, theta);
            r.push("f < 0 on (0,theta)", ok, w);
            let (ok, w) = s.positive(theta, 1.0);
            r.push("f > 0 on (theta,1)", ok, w);
            let (ok, w) = s.negative(1.0, nl.u_max + 1e-12);
            r.push("f < 0 on (1,u_max)", ok, w);
            let d0 = nl.f_prime(0.0);
            r.push("f'(0) < 0", d0 < 0.0, d0.max(0.0));
            let d1 = nl.f_prime(1.0);
            r.push("f'(1) < 0", d1 < 0.0, d1.max(0.0));
            let area = nl.integral(0.0, 1.0);
            r.push("integral of f over [0,1] > 0", area > 1e-12, (-area).max(0.0));
        }
        Kind::Combustion => {
            let theta = nl.theta.or_else(|| detect_combustion_theta(&s));
            let Some(theta) = theta.filter(|t| *t > 0.0 && *t < 1.0) else {
                r.push("dead zone [0,theta] with theta in (0,1)", false, 0.0);
                return r;
            };
            r.theta = Some(theta);
            let dead =
                s.u.iter()
                    .zip(&s.f)
                    .filter(|(u, _)| **u <= theta)
                    .map(|(_, f)| f.abs())
                    .fold(0.0, f64::max);
            r.push("f = 0 on [0,theta]", dead <= ZERO_TOL, dead);
            let (ok, w) = s.positive(theta, 1.0);
            r.push("f > 0 on (theta,1)", ok, w);
            let f1 = nl.f(1.0).abs();
            r.push("f(1) = 0", f1 <= 1e-12, f1);
            let d1 = nl.f_prime(1.0);
            r.push("f'(1) < 0", d1 < 0.0, d1.max(0.0));
            let (ok, w) = s.negative(1.0, nl.u_max + 1e-12);
            r.push("f < 0 on (1,u_max)", ok, w);
            match nl.delta {
                Some(delta) if delta > 0.0 => {
                    let window: Vec<f64> = s.open(theta, theta + delta).map(|(_, f)| f).collect();
                    let worst = window.windows(2).map(|p| (p[0] - p[1]).max(0.0)).fold(0.0, f64::max);
                    r.push("f nondecreasing on (theta,theta+delta)", worst <= ZERO_TOL, worst);
                }
                _ => r.push("monotonicity window delta > 0 given", false, 0.0),
            }
            if matches!(nl.reaction, Reaction::CombustionQuadratic { .. }) {
                r.notes
                    .push("quadratic contact (u-theta)^2 at theta: f is C^1 there".into());
            }
        }
        Kind::Monostable => {
            let (ok, w) = s.positive(0.0, 1.0);
            r.push("f > 0 on (0,1)", ok, w);
            let f1 = nl.f(1.0).abs();
            r.push("f(1) = 0", f1 <= 1e-12, f1);
            let d0 = nl.f_prime(0.0);
            r.push("f'(0) > 0", d0 > 0.0, (-d0).max(0.0));
            let (ok, w) = s.negative(1.0, nl.u_max + 1e-12);
            r.push("f < 0 on (1,u_max)", ok, w);
        }
        Kind::Custom => {
            let worst =
                s.u.iter()
                    .zip(&s.f)
                    .filter(|(u, _)| **u > 1.0)
                    .map(|(_, f)| f.max(0.0))
                    .fold(0.0, f64::max);
            r.push("f <= 0 on (1,u_max)", worst <= ZERO_TOL, worst);
        }
    }
    if let Some(alpha) = nl.alpha {
        r.notes
            .push(format!("Hoelder exponent alpha = {alpha} (metadata, not verified)"));
    }
    r
}

// first sampled sign change from negative to positive inside (0,1)
fn detect_bistable_theta(s: &Samples) -> Option<f64> {
    let mut seen_negative = false;
    for w in s.u.windows(2).zip(s.f.windows(2)) {
        let (u, f) = w;
        if u[1] >= 1.0 {
            break;
        }
        if f[0] < 0.0 {
            seen_negative = true;
        }
        if seen_negative && f[0] <= 0.0 && f[1] > 0.0 {
            return Some(u[0] - f[0] * (u[1] - u[0]) / (f[1] - f[0]));
        }
    }
    None
}

// right end of the initial run of zeros
fn detect_combustion_theta(s: &Samples) -> Option<f64> {
    let mut last = None;
    for (u, f) in s.u.iter().zip(&s.f) {
        if *u >= 1.0 || f.abs() > ZERO_TOL {
            break;
        }
        last = Some(*u);
    }
    last.filter(|t| *t > 0.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_unbalance_decides_acceptance() {
        let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
        assert!((nl.integral(0.0, 1.0) - (1.0 / 12.0 - 0.25 / 6.0)).abs() < 1e-15);
        let err = Nonlinearity::bistable_cubic(0.5).unwrap_err();
        assert!(err.to_string().contains("integral"), "{err}");
    }

    #[test]
    fn combustion_dead_zone() {
        let nl = Nonlinearity::combustion(0.5).unwrap();
        assert_eq!(nl.f(0.25), 0.0);
        assert_eq!(nl.potential_f(0.4), 0.0);
        assert!((nl.delta().unwrap() - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn lambda0_values() {
        assert!((Nonlinearity::bistable_cubic(0.25).unwrap().lambda0().unwrap() - 2.0).abs() < 1e-14);
        assert!((Nonlinearity::bistable_cubic(0.04).unwrap().lambda0().unwrap() - 5.0).abs() < 1e-12);
        assert!(Nonlinearity::combustion(0.5).unwrap().lambda0().is_err());
    }

    #[test]
    fn slope_bound_covers_samples() {
        let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
        for i in 0..200 {
            let u = 2.0 * i as f64 / 199.0;
            assert!(nl.f_prime(u).abs() <= nl.slope_bound(u) + 1e-12);
        }
    }
}
