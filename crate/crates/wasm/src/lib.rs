//! Browser bindings: ξ₀, the semi-wave speed and a short simulation.

use frontlab::classify::{classify_state, default_mode, Margins};
use frontlab::fb_solver::{Shape, Solver, SolverConfig, StopRule};
use frontlab::nonlinearity::{make_builtin, Kind};
use frontlab::semiwave::solve_semiwave;
use frontlab::stefan::solve_xi0;
use frontlab::Nonlinearity;
use wasm_bindgen::prelude::*;

fn err(e: frontlab::Error) -> JsError {
    JsError::new(&e.to_string())
}

fn nonlinearity(kind: &str, param: f64) -> Result<Nonlinearity, JsError> {
    let kind = match kind {
        "bistable" => Kind::Bistable,
        "combustion" => Kind::Combustion,
        "monostable" => Kind::Monostable,
        other => return Err(JsError::new(&format!("unknown nonlinearity `{other}`"))),
    };
    make_builtin(kind, Some(param)).map_err(err)
}

/// Root of 2ξ e^{ξ²} ∫₀^ξ e^{-s²} ds = μθ.
#[wasm_bindgen]
pub fn xi0(mu: f64, theta: f64) -> Result<f64, JsError> {
    solve_xi0(mu, theta).map_err(err)
}

#[wasm_bindgen]
pub struct SemiWave {
    c_star: f64,
    z: Vec<f64>,
    q: Vec<f64>,
}

#[wasm_bindgen]
impl SemiWave {
    #[wasm_bindgen(getter)]
    pub fn c_star(&self) -> f64 {
        self.c_star
    }

    pub fn z(&self) -> Vec<f64> {
        self.z.clone()
    }

    pub fn q(&self) -> Vec<f64> {
        self.q.clone()
    }
}

#[wasm_bindgen]
pub fn semiwave(kind: &str, param: f64, mu: f64) -> Result<SemiWave, JsError> {
    let nl = nonlinearity(kind, param)?;
    let sw = solve_semiwave(&nl, mu, 1e-10).map_err(err)?;
    let (z, q) = sw.samples();
    // thin to about 400 points for plotting
    let stride = (z.len() / 400).max(1);
    Ok(SemiWave {
        c_star: sw.c_star,
        z: z.iter().step_by(stride).copied().collect(),
        q: q.iter().step_by(stride).copied().collect(),
    })
}

#[wasm_bindgen]
pub struct Run {
    t: Vec<f64>,
    h: Vec<f64>,
    x: Vec<f64>,
    u: Vec<f64>,
    verdict: String,
}

#[wasm_bindgen]
impl Run {
    pub fn t(&self) -> Vec<f64> {
        self.t.clone()
    }

    pub fn h(&self) -> Vec<f64> {
        self.h.clone()
    }

    /// Final profile on the full support.
    pub fn x(&self) -> Vec<f64> {
        self.x.clone()
    }

    pub fn u(&self) -> Vec<f64> {
        self.u.clone()
    }

    #[wasm_bindgen(getter)]
    pub fn verdict(&self) -> String {
        self.verdict.clone()
    }
}

/// Cos-bump σ cos(πx/2h0) run to `t_end` (or an earlier verdict).
#[wasm_bindgen]
pub fn simulate(kind: &str, param: f64, sigma: f64, h0: f64, mu: f64, t_end: f64) -> Result<Run, JsError> {
    let nl = nonlinearity(kind, param)?;
    let shape = Shape::Cos { sigma };
    let cfg = SolverConfig {
        n: 200,
        mu,
        t_end,
        ..SolverConfig::default()
    };
    let mut solver = Solver::new(&nl, cfg).map_err(err)?;
    let state = solver
        .init(&|x| shape.eval(x, h0), h0, default_mode(&shape))
        .map_err(err)?;
    let mut verdict = None;
    let mut hook = |s: &frontlab::fb_solver::FrontState| {
        verdict = classify_state(s, &nl, Margins::default(), h0, mu);
        verdict.is_some()
    };
    let traj = solver.run(
        state,
        StopRule::Verdict {
            hook: &mut hook,
            t_cap: t_end,
        },
    );
    if let Some(f) = traj.failure {
        return Err(JsError::new(&f));
    }
    let s = &traj.final_state;
    let mut x: Vec<f64> = s.xs().iter().rev().map(|x| -x).collect();
    let mut u: Vec<f64> = s.values.iter().rev().copied().collect();
    x.extend(s.xs().into_iter().skip(1));
    u.extend(s.values.iter().skip(1));
    let stride = (traj.samples.len() / 500).max(1);
    Ok(Run {
        t: traj.samples.iter().step_by(stride).map(|p| p.t).collect(),
        h: traj.samples.iter().step_by(stride).map(|p| p.h).collect(),
        x,
        u,
        verdict: verdict.map_or("undecided".into(), |v| format!("{v:?}").to_lowercase()),
    })
}
