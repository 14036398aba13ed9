//! Discrete zero number and sign patterns of differences of solutions.

use serde::Serialize;

use crate::fb_solver::{FrontState, Mode};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SignPattern {
    /// Compressed symbols over {+, 0, -}; "0" marks dead-band runs of two or more nodes.
    pub pattern: String,
    pub zero_locations: Vec<f64>,
    pub tolerance: f64,
    /// Sign changes between nonzero symbols.
    pub count: usize,
    /// Smallest |w| slope across a located zero, None without zeros.
    pub min_slope: Option<f64>,
    /// First or last node lies in the dead band.
    pub endpoint_zero: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Sym {
    Plus,
    Zero,
    Minus,
}

impl Sym {
    fn char(self) -> char {
        match self {
            Sym::Plus => '+',
            Sym::Zero => '0',
            Sym::Minus => '-',
        }
    }
}

/// Dead-band quantization of `ws` and run-length compression.
pub fn sign_pattern(xs: &[f64], ws: &[f64], tol: f64) -> SignPattern {
    assert_eq!(xs.len(), ws.len(), "xs and ws differ in length");
    let syms: Vec<Sym> = ws
        .iter()
        .map(|&w| {
            if w > tol {
                Sym::Plus
            } else if w < -tol {
                Sym::Minus
            } else {
                Sym::Zero
            }
        })
        .collect();

    // runs of equal symbols: (symbol, first index, last index)
    let mut runs: Vec<(Sym, usize, usize)> = Vec::new();
    for (i, &s) in syms.iter().enumerate() {
        match runs.last_mut() {
            Some(r) if r.0 == s => r.2 = i,
            _ => runs.push((s, i, i)),
        }
    }

    let mut pattern = String::new();
    let mut zeros = Vec::new();
    let mut count = 0;
    let mut min_slope: Option<f64> = None;
    let push = |c: char, pattern: &mut String| {
        if !pattern.ends_with(c) {
            pattern.push(c);
        }
    };
    let mut last_signed: Option<(Sym, usize)> = None;
    for (k, &(s, a, b)) in runs.iter().enumerate() {
        match s {
            Sym::Zero => {
                if b > a {
                    push('0', &mut pattern);
                }
                // zero location recorded when the run separates opposite signs or is wide
                let before = k.checked_sub(1).map(|i| runs[i].0);
                let after = runs.get(k + 1).map(|r| r.0);
                if b > a || before.is_some() && before != after {
                    zeros.push(0.5 * (xs[a] + xs[b]));
                }
            }
            _ => {
                if let Some((prev, i)) = last_signed {
                    if prev != s {
                        count += 1;
                        let j = a;
                        let slope = ((ws[j] - ws[i]) / (xs[j] - xs[i])).abs();
                        min_slope = Some(min_slope.map_or(slope, |m: f64| m.min(slope)));
                        if j == i + 1 {
                            let w = ws[i] / (ws[i] - ws[j]);
                            zeros.push(xs[i] + w * (xs[j] - xs[i]));
                        }
                    }
                }
                push(s.char(), &mut pattern);
                last_signed = Some((s, b));
            }
        }
    }
    if pattern.is_empty() {
        pattern.push('0');
    }
    let endpoint_zero = matches!(syms.first(), Some(Sym::Zero)) || matches!(syms.last(), Some(Sym::Zero));
    SignPattern {
        pattern,
        zero_locations: zeros,
        tolerance: tol,
        count,
        min_slope,
        endpoint_zero,
    }
}

/// w(x) = u(x) - u(-x) on [-k, k], k = min(h, -g), on a grid of the state's spacing.
pub fn reflection_difference(state: &FrontState) -> (Vec<f64>, Vec<f64>) {
    let k = match state.mode {
        Mode::TwoFront => state.h.min(-state.g),
        Mode::SymmetricHalf => state.h,
        Mode::PinnedLeft => 0.0,
    };
    if !(k > 0.0) {
        return (vec![0.0], vec![0.0]);
    }
    let half = ((k / state.dx()).round() as usize).max(1);
    let m = 2 * half;
    let xs: Vec<f64> = (0..=m).map(|i| k * (i as f64 / half as f64 - 1.0)).collect();
    let mut ws = vec![0.0; m + 1];
    if state.mode == Mode::TwoFront {
        for i in half + 1..=m {
            let w = state.u_at(xs[i]) - state.u_at(-xs[i]);
            ws[i] = w;
            ws[m - i] = -w;
        }
    }
    (xs, ws)
}

/// u_a - u_b on the common support, sampled on the finer of the two grids.
pub fn solution_difference(a: &FrontState, b: &FrontState) -> (Vec<f64>, Vec<f64>) {
    let (ga, gb) = (full_left(a), full_left(b));
    let lo = ga.max(gb);
    let hi = a.h.min(b.h);
    if !(hi > lo) {
        return (vec![lo], vec![0.0]);
    }
    let dx = a.dx().min(b.dx());
    let m = (((hi - lo) / dx).round() as usize).max(1);
    let xs: Vec<f64> = (0..=m).map(|i| lo + (hi - lo) * i as f64 / m as f64).collect();
    let ws = xs.iter().map(|&x| a.u_at(x) - b.u_at(x)).collect();
    (xs, ws)
}

fn full_left(s: &FrontState) -> f64 {
    match s.mode {
        Mode::SymmetricHalf => -s.h,
        _ => s.left(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ZeroOptions {
    /// Dead band as a fraction of max |w|.
    pub rel_tol: f64,
    /// Degeneracy threshold on |w_x|, measured in units of max|w| / interval length.
    pub slope_tol: f64,
}

impl Default for ZeroOptions {
    fn default() -> Self {
        Self {
            rel_tol: 1e-7,
            slope_tol: 1e-5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ZeroCountSeries {
    pub times: Vec<f64>,
    pub counts: Vec<usize>,
    pub degenerate: Vec<bool>,
    /// An endpoint value sits in the dead band or changed sign since the
    /// previous frame, i.e. a zero may have crossed the interval end.
    pub endpoint_hits: Vec<bool>,
    pub patterns: Vec<String>,
}

impl ZeroCountSeries {
    /// Indices i where counts[i] > counts[i-1].
    pub fn increases(&self) -> Vec<usize> {
        (1..self.counts.len())
            .filter(|&i| self.counts[i] > self.counts[i - 1])
            .collect()
    }

    /// Drops with no degenerate flag within `window` samples either side.
    pub fn unflagged_drops(&self, window: usize) -> Vec<usize> {
        (1..self.counts.len())
            .filter(|&i| self.counts[i] < self.counts[i - 1])
            .filter(|&i| {
                let a = i.saturating_sub(window + 1);
                let b = (i + window).min(self.counts.len() - 1);
                !(a..=b).any(|k| self.degenerate[k])
            })
            .collect()
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("t,count,degenerate\n");
        for i in 0..self.times.len() {
            out.push_str(&format!(
                "{},{},{}\n",
                self.times[i], self.counts[i], self.degenerate[i] as u8
            ));
        }
        out
    }
}

/// Zero counts per frame with a dead band relative to each frame's max |w|.
/// Frames are flagged degenerate for a small slope at a zero, a wide dead-band
/// run, or an endpoint hit.
pub fn zero_count_series(frames: &[(f64, Vec<f64>, Vec<f64>)], opts: ZeroOptions) -> ZeroCountSeries {
    let mut out = ZeroCountSeries {
        times: Vec::with_capacity(frames.len()),
        counts: Vec::with_capacity(frames.len()),
        degenerate: Vec::with_capacity(frames.len()),
        endpoint_hits: Vec::with_capacity(frames.len()),
        patterns: Vec::with_capacity(frames.len()),
    };
    let mut prev_ends: Option<(f64, f64)> = None;
    for (t, xs, ws) in frames {
        let scale = ws.iter().fold(0.0f64, |m, w| m.max(w.abs()));
        let p = sign_pattern(xs, ws, opts.rel_tol * scale);
        let ends = (
            ws.first().copied().unwrap_or(0.0).signum(),
            ws.last().copied().unwrap_or(0.0).signum(),
        );
        let flipped = prev_ends.is_some_and(|e| e != ends);
        prev_ends = Some(ends);
        let endpoint_hit = p.endpoint_zero || flipped;
        let width = xs.last().copied().unwrap_or(0.0) - xs.first().copied().unwrap_or(0.0);
        let slope_scale = if width > 0.0 { scale / width } else { scale };
        let degenerate = p.pattern.contains('0') && p.pattern.len() > 1
            || p.min_slope.is_some_and(|s| s < opts.slope_tol * slope_scale)
            || endpoint_hit;
        out.times.push(*t);
        out.counts.push(p.count);
        out.degenerate.push(degenerate);
        out.endpoint_hits.push(endpoint_hit);
        out.patterns.push(p.pattern);
    }
    out
}
