//! Semi-wave problem q'' - c q' + f(q) = 0 on z > 0, q(0) = 0, μ q'(0) = c,
//! q(∞) = 1, solved by shooting along the stable manifold of (1, 0).

use serde::Serialize;

use crate::fb_solver::Trajectory;
use crate::nonlinearity::{Kind, Nonlinearity};
use crate::numerics::HermiteQuintic;
use crate::{Error, Result};

/// Offset from the saddle where integration starts.
const SADDLE_OFFSET: f64 = 5e-7;
const STEP: f64 = 2e-3;
const Z_CAP: f64 = 2000.0;
const MAX_DOUBLINGS: usize = 60;

#[derive(Debug, Clone)]
pub struct SemiWaveSolution {
    pub c_star: f64,
    pub mu: f64,
    /// Max |q'' - c q' + f(q)| on the sample grid.
    pub residual: f64,
    pub bracket: (f64, f64),
    pub iterations: usize,
    pub z_max: f64,
    decay: f64,
    profile: HermiteQuintic,
}

impl SemiWaveSolution {
    pub fn value(&self, z: f64) -> f64 {
        if z <= 0.0 {
            0.0
        } else if z > self.z_max {
            1.0 - SADDLE_OFFSET * (self.decay * (z - self.z_max)).exp()
        } else {
            self.profile.eval(z)
        }
    }

    pub fn slope(&self, z: f64) -> f64 {
        if z > self.z_max {
            -self.decay * SADDLE_OFFSET * (self.decay * (z - self.z_max)).exp()
        } else {
            self.profile.eval_with_slope(z.max(0.0)).1
        }
    }

    pub fn samples(&self) -> (&[f64], &[f64]) {
        self.profile.knots()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
enum Exit {
    /// Reached q = 0 with this p.
    Hit(f64),
    /// p vanished (or the cap was hit) before q = 0.
    Stalled,
}

struct Shot {
    exit: Exit,
    // (z measured backward from the start, q, p), along the integration
    path: Vec<(f64, f64, f64)>,
    // exact linear piece on [0, θ] for combustion: (p at q = θ, q = θ)
    plateau: Option<(f64, f64)>,
}

fn rhs(nl: &Nonlinearity, c: f64, q: f64, p: f64) -> (f64, f64) {
    // backward in z: d/ds = -d/dz
    (-p, -(c * p - nl.f(q)))
}

fn rk4(nl: &Nonlinearity, c: f64, q: f64, p: f64, h: f64) -> (f64, f64) {
    let (k1q, k1p) = rhs(nl, c, q, p);
    let (k2q, k2p) = rhs(nl, c, q + 0.5 * h * k1q, p + 0.5 * h * k1p);
    let (k3q, k3p) = rhs(nl, c, q + 0.5 * h * k2q, p + 0.5 * h * k2p);
    let (k4q, k4p) = rhs(nl, c, q + h * k3q, p + h * k3p);
    (
        q + h / 6.0 * (k1q + 2.0 * k2q + 2.0 * k3q + k4q),
        p + h / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
    )
}

// Partial step landing on q = target, by Newton on the step length.
fn land(nl: &Nonlinearity, c: f64, q: f64, p: f64, target: f64) -> (f64, f64, f64) {
    let mut h = (q - target) / p.max(1e-300);
    for _ in 0..8 {
        let (qn, pn) = rk4(nl, c, q, p, h);
        let dh = (qn - target) / pn.max(1e-300);
        h += dh;
        if dh.abs() < 1e-16 {
            break;
        }
    }
    let (qn, pn) = rk4(nl, c, q, p, h);
    (h, qn, pn)
}

fn shoot(nl: &Nonlinearity, c: f64, keep_path: bool) -> Shot {
    let f1 = nl.f_prime(1.0);
    let lam = 0.5 * (c - (c * c - 4.0 * f1).sqrt());
    let mut q = 1.0 - SADDLE_OFFSET;
    let mut p = -lam * SADDLE_OFFSET;
    let mut s = 0.0;
    let mut path = Vec::new();
    if keep_path {
        path.push((s, q, p));
    }
    let floor = match nl.kind() {
        Kind::Combustion => nl.theta().unwrap_or(0.0),
        _ => 0.0,
    };
    loop {
        if p <= 0.0 || s > Z_CAP {
            return Shot {
                exit: Exit::Stalled,
                path,
                plateau: None,
            };
        }
        let (qn, pn) = rk4(nl, c, q, p, STEP);
        if qn <= floor {
            let (h, ql, pl) = land(nl, c, q, p, floor);
            s += h;
            q = ql;
            p = pl;
            if keep_path {
                path.push((s, q, p));
            }
            break;
        }
        s += STEP;
        q = qn;
        p = pn;
        if keep_path {
            path.push((s, q, p));
        }
    }
    if floor > 0.0 {
        // f ≡ 0 below θ: p' = c p, so p = p_θ - c (θ - q) exactly
        let p0 = p - c * floor;
        let exit = if p0 > 0.0 && p > 0.0 {
            Exit::Hit(p0)
        } else {
            Exit::Stalled
        };
        Shot {
            exit,
            path,
            plateau: Some((p, floor)),
        }
    } else if p > 0.0 {
        Shot {
            exit: Exit::Hit(p),
            path,
            plateau: None,
        }
    } else {
        Shot {
            exit: Exit::Stalled,
            path,
            plateau: None,
        }
    }
}

/// Sign convention: positive when c is too small.
fn shooting_value(nl: &Nonlinearity, mu: f64, c: f64) -> f64 {
    match shoot(nl, c, false).exit {
        Exit::Hit(p0) => p0 - c / mu,
        Exit::Stalled => -c / mu - 1.0,
    }
}

pub fn solve_semiwave(nl: &Nonlinearity, mu: f64, tol: f64) -> Result<SemiWaveSolution> {
    if !matches!(nl.kind(), Kind::Monostable | Kind::Bistable | Kind::Combustion) {
        return Err(Error::NotApplicable(format!(
            "semi-wave needs a classified f, got {}",
            nl.kind()
        )));
    }
    if !(mu > 0.0) {
        return Err(Error::OutOfRange(format!("mu = {mu} must be positive")));
    }
    if !(nl.f_prime(1.0) < 0.0) {
        return Err(Error::NotApplicable("f'(1) must be negative".into()));
    }
    let tol = tol.max(1e-15);
    let mut lo = 0.0;
    if shooting_value(nl, mu, lo) <= 0.0 {
        return Err(Error::BracketFailure("no undershoot at c = 0".into()));
    }
    let mut hi = 1.0;
    let mut doublings = 0;
    while shooting_value(nl, mu, hi) > 0.0 {
        lo = hi;
        hi *= 2.0;
        doublings += 1;
        if doublings > MAX_DOUBLINGS {
            return Err(Error::BracketFailure(format!(
                "no overshoot after {MAX_DOUBLINGS} doublings; nonlinearity class inconsistent"
            )));
        }
    }
    let mut iterations = 0;
    while hi - lo > tol {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if shooting_value(nl, mu, mid) > 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        iterations += 1;
    }
    let c = 0.5 * (lo + hi);
    build_solution(nl, mu, c, (lo, hi), iterations)
}

fn build_solution(
    nl: &Nonlinearity,
    mu: f64,
    c: f64,
    bracket: (f64, f64),
    iterations: usize,
) -> Result<SemiWaveSolution> {
    let shot = shoot(nl, c, true);
    let p0 = match shot.exit {
        Exit::Hit(p0) => p0,
        Exit::Stalled => {
            return Err(Error::BracketFailure(format!(
                "profile at c = {c} does not reach q = 0"
            )));
        }
    };
    let s_end = shot.path.last().map_or(0.0, |r| r.0);
    // exact piece on [0, θ] for combustion, measured forward from q = 0
    let (z_shift, mut rows) = match shot.plateau {
        Some((p_theta, _)) => {
            let z_theta = (p_theta / p0).ln() / c;
            let n = ((z_theta / STEP).ceil() as usize).max(2);
            let rows: Vec<(f64, f64, f64)> = (0..n)
                .map(|k| {
                    let z = z_theta * k as f64 / n as f64;
                    let e = (c * z).exp();
                    (z, p0 / c * (e - 1.0), p0 * e)
                })
                .collect();
            (z_theta, rows)
        }
        None => (0.0, Vec::new()),
    };
    rows.extend(shot.path.iter().rev().map(|&(s, q, p)| (z_shift + s_end - s, q, p)));

    let residual = defect(nl, c, &rows);
    let zs: Vec<f64> = rows.iter().map(|r| r.0).collect();
    let qs: Vec<f64> = rows.iter().map(|r| r.1).collect();
    let ps: Vec<f64> = rows.iter().map(|r| r.2).collect();
    let pps: Vec<f64> = rows.iter().map(|r| c * r.2 - nl.f(r.1)).collect();
    let z_max = *zs.last().unwrap();
    let f1 = nl.f_prime(1.0);
    let decay = 0.5 * (c - (c * c - 4.0 * f1).sqrt());
    Ok(SemiWaveSolution {
        c_star: c,
        mu,
        residual,
        bracket,
        iterations,
        z_max,
        decay,
        profile: HermiteQuintic::new(zs, qs, ps, pps),
    })
}

// q'' from a five-point centered difference of p = q' on uniformly spaced runs.
fn defect(nl: &Nonlinearity, c: f64, rows: &[(f64, f64, f64)]) -> f64 {
    let mut worst: f64 = 0.0;
    for w in rows.windows(5) {
        let h = w[1].0 - w[0].0;
        let uniform = w.windows(2).all(|p| ((p[1].0 - p[0].0) - h).abs() <= 1e-9 * h);
        if !uniform || h <= 0.0 {
            continue;
        }
        let dp = (w[0].2 - 8.0 * w[1].2 + 8.0 * w[3].2 - w[4].2) / (12.0 * h);
        let (_, q, p) = w[2];
        worst = worst.max((dp - c * p + nl.f(q)).abs());
    }
    worst
}

#[derive(Debug, Clone, Serialize)]
pub struct FitReport {
    pub applicable: bool,
    pub slope_h: f64,
    pub slope_minus_g: f64,
    pub c_star: f64,
    pub rel_gap: f64,
    pub note: String,
}

/// Least-squares slopes of h(t) and -g(t) over the last half of the samples.
pub fn spreading_speed_check(traj: &Trajectory, sw: &SemiWaveSolution) -> FitReport {
    let t_end = traj.samples.last().map_or(0.0, |s| s.t);
    let half: Vec<_> = traj.samples.iter().filter(|s| s.t >= 0.5 * t_end).collect();
    let fit = |ys: &dyn Fn(&crate::fb_solver::Sample) -> f64| -> f64 {
        let n = half.len() as f64;
        let mt = half.iter().map(|s| s.t).sum::<f64>() / n;
        let my = half.iter().map(|s| ys(s)).sum::<f64>() / n;
        let sxy: f64 = half.iter().map(|s| (s.t - mt) * (ys(s) - my)).sum();
        let sxx: f64 = half.iter().map(|s| (s.t - mt).powi(2)).sum();
        sxy / sxx
    };
    if half.len() < 2 {
        return FitReport {
            applicable: false,
            slope_h: 0.0,
            slope_minus_g: 0.0,
            c_star: sw.c_star,
            rel_gap: f64::NAN,
            note: "too few samples".into(),
        };
    }
    let slope_h = fit(&|s| s.h);
    let slope_g = fit(&|s| -s.g);
    let rel_gap = (slope_h - sw.c_star).abs() / sw.c_star;
    let (applicable, note) = if t_end < 100.0 {
        (false, format!("final time {t_end} below 100"))
    } else if slope_h < 0.05 * sw.c_star {
        (false, "fronts essentially stopped: not a spreading run".to_string())
    } else {
        (true, String::new())
    };
    FitReport {
        applicable,
        slope_h,
        slope_minus_g: slope_g,
        c_star: sw.c_star,
        rel_gap,
        note,
    }
}
