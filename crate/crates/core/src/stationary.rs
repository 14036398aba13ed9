//! Stationary profiles: the bistable ground state V, combustion bumps V_b,
//! the level curve ξ_m(t) and executable checks of the log-law barriers.

use serde::Serialize;

use crate::nonlinearity::{Kind, Nonlinearity};
use crate::numerics::roots::bisect;
use crate::numerics::{GaussLegendre, HermiteQuintic};
use crate::{Error, Result};

const KNOTS: usize = 2000;

/// Even, positive, decaying solution of V'' + f(V) = 0 with V'(0) = 0.
#[derive(Debug, Clone)]
pub struct GroundState {
    pub v0: f64,
    pub lambda0: f64,
    pub a0: f64,
    pub a: f64,
    nl: Nonlinearity,
    top_full: f64,
    sampler: HermiteQuintic,
}

pub fn ground_state(nl: &Nonlinearity) -> Result<GroundState> {
    if nl.kind() != Kind::Bistable {
        return Err(Error::NotApplicable(format!(
            "ground state needs a bistable f, got {}",
            nl.kind()
        )));
    }
    let theta = nl.theta().expect("bistable carries theta");
    let lambda0 = nl.lambda0()?;
    let v0 = smallest_potential_zero(nl, theta)?;

    let mut gs = GroundState {
        v0,
        lambda0,
        a0: 0.0,
        a: 0.0,
        nl: nl.clone(),
        top_full: 0.0,
        sampler: HermiteQuintic::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2], vec![0.0; 2]),
    };
    gs.top_full = gs.top_integral((0.5 * v0).sqrt());

    let gl = GaussLegendre::standard();
    let s_hi = (0.5 * v0).ln();
    let tail = gl.integrate(|sg| sg.exp() / gs.sqrt_f(sg.exp()) - lambda0, s_hi - 60.0, s_hi);
    gs.a0 = tail + gs.top_full - lambda0 * std::f64::consts::LN_2;
    gs.a = v0 * (gs.a0 / lambda0).exp();

    let x_max = 30.0 * lambda0;
    let mut xs = Vec::with_capacity(KNOTS);
    let mut vs = Vec::with_capacity(KNOTS);
    let mut ds = Vec::with_capacity(KNOTS);
    let mut dds = Vec::with_capacity(KNOTS);
    for j in 0..KNOTS {
        let x = x_max * j as f64 / (KNOTS - 1) as f64;
        let v = if j == 0 { v0 } else { gs.invert(x) };
        xs.push(x);
        vs.push(v);
        ds.push(-gs.sqrt_f(v));
        dds.push(-nl.f(v));
    }
    gs.sampler = HermiteQuintic::new(xs, vs, ds, dds);
    Ok(gs)
}

fn smallest_potential_zero(nl: &Nonlinearity, theta: f64) -> Result<f64> {
    let steps = 2000;
    let mut prev = theta;
    for i in 1..=steps {
        let u = theta + (1.0 - theta) * i as f64 / steps as f64;
        if nl.potential_f(u) <= 0.0 {
            return bisect(|s| nl.potential_f(s), prev, u, 0.0, 200)
                .ok_or_else(|| Error::BracketFailure("potential zero".into()));
        }
        prev = u;
    }
    Err(Error::NotApplicable(
        "F has no zero in (theta, 1): unbalance violated".into(),
    ))
}

impl GroundState {
    /// √F(s), with F evaluated as 2∫_s^{v0} f near the top to avoid cancellation.
    fn sqrt_f(&self, s: f64) -> f64 {
        let f = if s >= 0.5 * self.v0 {
            2.0 * self.nl.integral(s, self.v0)
        } else {
            self.nl.potential_f(s)
        };
        f.max(0.0).sqrt()
    }

    /// √F(v0 - d) from the width d.
    fn sqrt_f_below(&self, d: f64) -> f64 {
        (2.0 * self.nl.integral_below(self.v0, d)).max(0.0).sqrt()
    }

    // ∫ over s = v0 - τ², τ ∈ [0, tau]
    fn top_integral(&self, tau: f64) -> f64 {
        GaussLegendre::standard().integrate(|t| 2.0 * t / self.sqrt_f_below(t * t), 0.0, tau)
    }

    fn tail_integral(&self, v: f64) -> f64 {
        GaussLegendre::standard().integrate(|sg| sg.exp() / self.sqrt_f(sg.exp()), v.ln(), (0.5 * self.v0).ln())
    }

    /// x(V) = ∫_V^{v0} ds/√F(s), the position where the profile equals `v`.
    pub fn level_position(&self, v: f64) -> f64 {
        if v >= self.v0 {
            0.0
        } else if v >= 0.5 * self.v0 {
            self.top_integral((self.v0 - v).sqrt())
        } else {
            self.top_full + self.tail_integral(v)
        }
    }

    // Newton on τ = √(v0 - V) near the top and on ln V in the tail.
    fn invert(&self, x: f64) -> f64 {
        if x <= self.top_full {
            let mut lo = 0.0;
            let mut hi = (0.5 * self.v0).sqrt();
            let mut tau = (x / self.top_full) * hi;
            for _ in 0..100 {
                let r = self.top_integral(tau) - x;
                if r > 0.0 {
                    hi = tau;
                } else {
                    lo = tau;
                }
                let d = 2.0 * tau / self.sqrt_f_below(tau * tau);
                let mut next = if d.is_finite() && d > 0.0 {
                    tau - r / d
                } else {
                    0.5 * (lo + hi)
                };
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                if (next - tau).abs() <= 1e-15 * tau.max(1e-300) || hi - lo < 1e-16 {
                    tau = next;
                    break;
                }
                tau = next;
            }
            self.v0 - tau * tau
        } else {
            let mut hi = (0.5 * self.v0).ln();
            let mut lo = hi - 2.0 * (x - self.top_full) / self.lambda0 - 10.0;
            let mut s = hi - (x - self.top_full) / self.lambda0;
            for _ in 0..100 {
                let v = s.exp();
                let r = self.level_position(v) - x;
                // x decreases in s
                if r > 0.0 {
                    lo = s;
                } else {
                    hi = s;
                }
                let d = -v / self.sqrt_f(v);
                let mut next = s - r / d;
                if !(next > lo && next < hi) {
                    next = 0.5 * (lo + hi);
                }
                if (next - s).abs() <= 1e-15 * s.abs().max(1.0) || hi - lo < 1e-15 {
                    s = next;
                    break;
                }
                s = next;
            }
            s.exp()
        }
    }

    pub fn nonlinearity(&self) -> &Nonlinearity {
        &self.nl
    }

    /// Last knot; beyond it V follows A e^{-x/λ₀}.
    pub fn x_max(&self) -> f64 {
        self.sampler.last()
    }

    /// V(x), evenly extended.
    pub fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        if x > self.x_max() {
            self.a * (-x / self.lambda0).exp()
        } else {
            self.sampler.eval(x)
        }
    }

    /// V'(x).
    pub fn slope(&self, x: f64) -> f64 {
        let ax = x.abs();
        let d = if ax > self.x_max() {
            -self.a / self.lambda0 * (-ax / self.lambda0).exp()
        } else {
            self.sampler.eval_with_slope(ax).1
        };
        if x < 0.0 {
            -d
        } else {
            d
        }
    }

    /// F(V) for a level V.
    pub fn potential(&self, v: f64) -> f64 {
        self.sqrt_f(v).powi(2)
    }

    /// ξ > 0 with V(ξ) = m/t.
    pub fn xi_m(&self, m: f64, t: f64) -> Result<f64> {
        if !(m > 0.0) || !(t > m / self.v0) {
            return Err(Error::OutOfRange(format!(
                "need m > 0 and t > m/V(0); m = {m}, t = {t}"
            )));
        }
        Ok(self.level_position(m / t))
    }

    /// dξ_m/dt = m / (t² √F(m/t)).
    pub fn xi_m_rate(&self, m: f64, t: f64) -> Result<f64> {
        self.xi_m(m, t)?;
        Ok(m / (t * t * self.sqrt_f(m / t)))
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        self.sampler.knots()
    }
}

/// Combustion bump: plateau θ + b at 0, level θ at l(b), zero at L(b),
/// linear on [l, L].
#[derive(Debug, Clone)]
pub struct BumpProfile {
    pub b: f64,
    pub theta: f64,
    pub l: f64,
    pub big_l: f64,
    pub slope: f64,
    g_b: f64,
    nl: Nonlinearity,
    inner: HermiteQuintic,
}

pub fn bump(nl: &Nonlinearity, b: f64) -> Result<BumpProfile> {
    if nl.kind() != Kind::Combustion {
        return Err(Error::NotApplicable(format!(
            "bump needs a combustion f, got {}",
            nl.kind()
        )));
    }
    let theta = nl.theta().expect("combustion carries theta");
    if !(b > 0.0 && b < 0.5 * (1.0 - theta)) {
        return Err(Error::OutOfRange(format!("b = {b} outside (0, (1-theta)/2)")));
    }
    let g_b = nl.shifted_potential_g(b)?;
    let mut bp = BumpProfile {
        b,
        theta,
        l: 0.0,
        big_l: 0.0,
        slope: -g_b.sqrt(),
        g_b,
        nl: nl.clone(),
        inner: HermiteQuintic::new(vec![0.0, 1.0], vec![0.0; 2], vec![0.0; 2], vec![0.0; 2]),
    };
    bp.l = bp.inner_integral(b.sqrt());
    bp.big_l = bp.l + theta / g_b.sqrt();

    let mut xs = Vec::with_capacity(KNOTS);
    let mut vs = Vec::with_capacity(KNOTS);
    let mut ds = Vec::with_capacity(KNOTS);
    let mut dds = Vec::with_capacity(KNOTS);
    let mut tau = 0.0;
    for j in 0..KNOTS {
        let x = bp.l * j as f64 / (KNOTS - 1) as f64;
        tau = if j == 0 {
            0.0
        } else if j == KNOTS - 1 {
            b.sqrt()
        } else {
            bp.invert(x, tau)
        };
        let v = theta + b - tau * tau;
        xs.push(x);
        vs.push(v);
        ds.push(-bp.gap_below(tau * tau).sqrt());
        dds.push(-nl.f(v));
    }
    bp.inner = HermiteQuintic::new(xs, vs, ds, dds);
    Ok(bp)
}

impl BumpProfile {
    // G(b) - G(b - d), from the width d
    fn gap_below(&self, d: f64) -> f64 {
        (2.0 * self.nl.integral_below(self.theta + self.b, d)).max(0.0)
    }

    // G(b) - G(s) = 2∫_s^b f(r+θ) dr
    fn gap(&self, s: f64) -> f64 {
        (2.0 * self.nl.integral(self.theta + s, self.theta + self.b)).max(0.0)
    }

    fn inner_integral(&self, tau: f64) -> f64 {
        if tau <= 0.0 {
            return 0.0;
        }
        GaussLegendre::standard().integrate(|t| 2.0 * t / self.gap_below(t * t).sqrt(), 0.0, tau)
    }

    fn invert(&self, x: f64, guess: f64) -> f64 {
        let mut lo = 0.0;
        let mut hi = self.b.sqrt();
        let mut tau = guess.clamp(lo, hi);
        for _ in 0..100 {
            let r = self.inner_integral(tau) - x;
            if r > 0.0 {
                hi = tau;
            } else {
                lo = tau;
            }
            let d = 2.0 * tau / self.gap_below(tau * tau).sqrt();
            let mut next = if d.is_finite() && d > 0.0 {
                tau - r / d
            } else {
                0.5 * (lo + hi)
            };
            if !(next > lo && next < hi) {
                next = 0.5 * (lo + hi);
            }
            if (next - tau).abs() <= 1e-16 || hi - lo < 1e-16 {
                return next;
            }
            tau = next;
        }
        tau
    }

    /// Position where the inner profile equals `v` ∈ [θ, θ+b].
    pub fn level_position(&self, v: f64) -> f64 {
        let s = (v - self.theta).clamp(0.0, self.b);
        self.inner_integral((self.b - s).sqrt())
    }

    pub fn value(&self, x: f64) -> f64 {
        let x = x.abs();
        if x <= self.l {
            self.inner.eval(x)
        } else if x <= self.big_l {
            self.theta + self.slope * (x - self.l)
        } else {
            0.0
        }
    }

    pub fn slope_at(&self, x: f64) -> f64 {
        let ax = x.abs();
        let d = if ax <= self.l {
            self.inner.eval_with_slope(ax).1
        } else if ax <= self.big_l {
            self.slope
        } else {
            0.0
        };
        if x < 0.0 {
            -d
        } else {
            d
        }
    }

    /// G(b) - G(V - θ), the squared slope predicted by the energy identity.
    pub fn energy(&self, v: f64) -> f64 {
        self.gap(v - self.theta)
    }

    pub fn g_b(&self) -> f64 {
        self.g_b
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct InequalityCheck {
    pub name: String,
    /// Earliest grid time from which the inequality holds at every later grid time.
    pub onset: Option<f64>,
    /// Largest wrong-signed residual at or after the onset (0 when it holds).
    pub worst_after_onset: f64,
    /// Largest wrong-signed residual over the whole grid.
    pub worst_overall: f64,
    pub failing_at_end: bool,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Serialize)]
pub struct ResidualReport {
    pub m: f64,
    pub m1: f64,
    pub rho: f64,
    pub onset: Option<f64>,
    pub checks: Vec<InequalityCheck>,
}

impl ResidualReport {
    pub fn check(&self, name: &str) -> Option<&InequalityCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

pub const LOWER_PDE: &str = "lower: V_t - V_xx - f(V) <= 0";
pub const LOWER_FRONT: &str = "lower: xi_m' <= mu sqrt(F(m/t))";
pub const UPPER_PDE: &str = "upper: V_t - V_xx - f(V) >= 0 (inner)";
pub const UPPER_LINEAR: &str = "upper: V_t - f(V) >= 0 (linear part)";
pub const UPPER_KINK: &str = "upper: -3 m1/(lambda0 t) <= -sqrt(F(m1/t))";
pub const UPPER_FRONT: &str = "upper: h' >= 3 mu m1/(lambda0 t)";

/// Largest r ≤ θ with f < 0 and f' < f'(0)/2 on (0, r).
pub fn decay_level(nl: &Nonlinearity) -> f64 {
    let theta = nl.theta().unwrap_or(1.0);
    let half = 0.5 * nl.f_prime(0.0);
    let ok = |u: f64| nl.f(u) < 0.0 && nl.f_prime(u) < half;
    let n = 4000;
    let mut last = 0.0;
    for i in 1..n {
        let u = theta * i as f64 / n as f64;
        if !ok(u) {
            return bisect(|v| if ok(v) { -1.0 } else { 1.0 }, last, u, 1e-14, 200).unwrap_or(last);
        }
        last = u;
    }
    theta
}

/// Evaluates the sub- and supersolution inequalities behind the log law on
/// the given grids (x measured with the shift x0 = 0).
pub fn barrier_residuals(gs: &GroundState, mu: f64, m: f64, m1: f64, t_grid: &[f64], x_grid: &[f64]) -> ResidualReport {
    let nl = &gs.nl;
    let lam = gs.lambda0;
    let rho = decay_level(nl);
    let y_rho = gs.level_position(rho);

    let mut rows: Vec<[(f64, usize); 6]> = Vec::with_capacity(t_grid.len());
    for &t in t_grid {
        let mut row = [(0.0f64, 0usize); 6];
        let mut note = |k: usize, wrong: f64| {
            row[k].0 = row[k].0.max(wrong);
            row[k].1 += 1;
        };
        // lower barrier: V(y) - m/t on y ∈ [V⁻¹(ρ), ξ_m(t)], y = x + 1
        if let (Ok(xi), Ok(rate)) = (gs.xi_m(m, t), gs.xi_m_rate(m, t)) {
            let mt = m / t;
            let ys = x_grid.iter().map(|x| x + 1.0).chain([y_rho, xi]);
            for y in ys.filter(|y| *y >= y_rho && *y <= xi) {
                let v = gs.value(y);
                note(0, (mt / t + nl.f(v) - nl.f(v - mt)).max(0.0));
            }
            note(1, (rate - mu * gs.sqrt_f(mt)).max(0.0));
        }
        // upper barrier: V(y) + m1/t on y ∈ [V⁻¹(ρ), ξ_{m1}(t)], y = x - 1,
        // then linear down to zero over 2λ₀/3
        if let (Ok(xi), Ok(rate)) = (gs.xi_m(m1, t), gs.xi_m_rate(m1, t)) {
            let mt = m1 / t;
            let ys = x_grid.iter().map(|x| x - 1.0).chain([y_rho, xi]);
            for y in ys.filter(|y| *y >= y_rho && *y <= xi) {
                let v = gs.value(y);
                note(2, (-(-mt / t + nl.f(v) - nl.f(v + mt))).max(0.0));
            }
            let h_bar = xi + 2.0 * lam / 3.0 + 1.0;
            let x_kink = xi + 1.0;
            let xs = x_grid.iter().copied().chain([x_kink, h_bar]);
            for x in xs.filter(|x| *x >= x_kink && *x <= h_bar) {
                let w = 3.0 / lam * mt * (h_bar - x);
                let w_t = 3.0 / lam * (-mt / t * (h_bar - x) + mt * rate);
                note(3, (-(w_t - nl.f(w))).max(0.0));
            }
            note(4, (-3.0 * mt / lam + gs.sqrt_f(mt)).max(0.0));
            note(5, (3.0 * mu * mt / lam - rate).max(0.0));
        }
        rows.push(row);
    }

    let names = [LOWER_PDE, LOWER_FRONT, UPPER_PDE, UPPER_LINEAR, UPPER_KINK, UPPER_FRONT];
    let mut checks = Vec::with_capacity(6);
    for (k, name) in names.iter().enumerate() {
        let bad = |r: &[(f64, usize); 6]| r[k].0 > 0.0 || r[k].1 == 0;
        let last_bad = rows.iter().rposition(bad);
        let start = last_bad.map_or(0, |i| i + 1);
        let onset = t_grid.get(start).copied();
        let worst_after = rows[start..].iter().map(|r| r[k].0).fold(0.0, f64::max);
        let worst_overall = rows.iter().map(|r| r[k].0).fold(0.0, f64::max);
        checks.push(InequalityCheck {
            name: name.to_string(),
            onset,
            worst_after_onset: worst_after,
            worst_overall,
            failing_at_end: rows.last().is_none_or(bad),
            evaluations: rows.iter().map(|r| r[k].1).sum(),
        });
    }
    let onset = if checks.iter().all(|c| c.onset.is_some()) {
        checks
            .iter()
            .filter_map(|c| c.onset)
            .fold(None, |acc: Option<f64>, t| Some(acc.map_or(t, |a| a.max(t))))
    } else {
        None
    };
    ResidualReport {
        m,
        m1,
        rho,
        onset,
        checks,
    }
}

/// Doubling time grid t0, 2t0, 4t0, ... up to t_max.
pub fn doubling_grid(t0: f64, t_max: f64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut t = t0;
    while t <= t_max * (1.0 + 1e-12) {
        out.push(t);
        t *= 2.0;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cubic_top_level() {
        let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
        let gs = ground_state(&nl).unwrap();
        assert!((gs.v0 - (5.0 - 7f64.sqrt()) / 6.0).abs() < 1e-12);
        assert!((gs.lambda0 - 2.0).abs() < 1e-14);
    }

    #[test]
    fn decay_level_for_cubic() {
        let nl = Nonlinearity::bistable_cubic(0.25).unwrap();
        let r = decay_level(&nl);
        let exact = (2.5 - (6.25f64 - 1.5).sqrt()) / 6.0;
        assert!((r - exact).abs() < 1e-9, "{r} vs {exact}");
    }

    #[test]
    fn bump_rejects_out_of_range() {
        let nl = Nonlinearity::combustion(0.5).unwrap();
        assert!(bump(&nl, 0.3).is_err());
        assert!(bump(&nl, 0.0).is_err());
        assert!(bump(&Nonlinearity::bistable_cubic(0.25).unwrap(), 0.01).is_err());
    }
}
