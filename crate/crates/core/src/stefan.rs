//! Self-similar solution of the one-phase Stefan problem
//! η_t = η_xx on 0 < x < r(t), η(t,0) = θ, η(t,r) = 0, r' = -μ η_x(t,r).

use crate::numerics::roots::bisect;
use crate::{Error, Result};

const SQRT_PI: f64 = 1.772_453_850_905_516;

/// E(x) = (2/√π) ∫_0^x e^{-s²} ds.
pub fn erf_scaled(x: f64) -> f64 {
    libm::erf(x)
}

/// 2ξ e^{ξ²} ∫_0^ξ e^{-s²} ds.
pub fn xi0_lhs(xi: f64) -> f64 {
    SQRT_PI * xi * (xi * xi).exp() * erf_scaled(xi)
}

/// Root of 2ξ e^{ξ²} ∫_0^ξ e^{-s²} ds = μθ, bisected to machine resolution.
pub fn solve_xi0(mu: f64, theta: f64) -> Result<f64> {
    let target = mu * theta;
    if !(target > 0.0) || !target.is_finite() {
        return Err(Error::OutOfRange(format!("mu*theta = {target} must be positive")));
    }
    let mut hi = 1.0;
    while xi0_lhs(hi) < target {
        hi *= 2.0;
        if hi > 64.0 {
            return Err(Error::OutOfRange(format!("mu*theta = {target} too large")));
        }
    }
    bisect(|x| xi0_lhs(x) - target, 0.0, hi, 0.0, 2000).ok_or_else(|| Error::BracketFailure("xi0 bracket lost".into()))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StefanExact {
    pub xi0: f64,
    pub theta: f64,
    pub mu: f64,
    e_xi0: f64,
}

impl StefanExact {
    pub fn new(mu: f64, theta: f64) -> Result<Self> {
        let xi0 = solve_xi0(mu, theta)?;
        Ok(Self {
            xi0,
            theta,
            mu,
            e_xi0: erf_scaled(xi0),
        })
    }

    /// ρ(t) = 2ξ₀√t.
    pub fn rho(&self, t: f64) -> f64 {
        2.0 * self.xi0 * t.sqrt()
    }

    pub fn rho_rate(&self, t: f64) -> f64 {
        self.xi0 / t.sqrt()
    }

    /// Φ(t,x); negative beyond ρ(t), returned as is.
    pub fn phi(&self, t: f64, x: f64) -> f64 {
        self.theta / self.e_xi0 * (self.e_xi0 - erf_scaled(x / (2.0 * t.sqrt())))
    }

    fn kernel(&self, t: f64, x: f64) -> f64 {
        let eta = x / (2.0 * t.sqrt());
        self.theta / self.e_xi0 * 2.0 / SQRT_PI * (-eta * eta).exp()
    }

    pub fn phi_x(&self, t: f64, x: f64) -> f64 {
        -self.kernel(t, x) / (2.0 * t.sqrt())
    }

    pub fn phi_xx(&self, t: f64, x: f64) -> f64 {
        let eta = x / (2.0 * t.sqrt());
        self.kernel(t, x) * eta / (2.0 * t)
    }

    pub fn phi_t(&self, t: f64, x: f64) -> f64 {
        self.kernel(t, x) * x / (4.0 * t * t.sqrt())
    }

    /// Position where Φ(t,·) equals `level` ∈ [0, θ].
    pub fn level_position(&self, t: f64, level: f64) -> Option<f64> {
        if !(0.0..=self.theta).contains(&level) {
            return None;
        }
        let target = self.e_xi0 * (1.0 - level / self.theta);
        let eta = bisect(|e| erf_scaled(e) - target, 0.0, self.xi0, 0.0, 200)?;
        Some(2.0 * t.sqrt() * eta)
    }
}

/// max |Φ_t − Φ_xx| over grid points with 0 < x < ρ(t), from the analytic
/// derivatives.
pub fn verify_heat_residual(se: &StefanExact, t_grid: &[f64], x_grid: &[f64]) -> f64 {
    let mut worst: f64 = 0.0;
    for &t in t_grid {
        let rho = se.rho(t);
        for &x in x_grid.iter().filter(|&&x| x > 0.0 && x < rho) {
            worst = worst.max((se.phi_t(t, x) - se.phi_xx(t, x)).abs());
        }
    }
    worst
}
