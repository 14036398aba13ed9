//! Independent oracles shared by the integration tests.
#![allow(dead_code)]

/// erf(x) by its Maclaurin series with compensated summation for x ≤ 2, and
/// by the continued fraction for erfc beyond. Good to ~1e-15.
pub fn erf_series(x: f64) -> f64 {
    if x > 2.0 {
        return 1.0 - erfc_continued_fraction(x);
    }
    // 2/√π Σ (-1)^n x^{2n+1} / (n! (2n+1))
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    let mut term = x; // (-1)^n x^{2n+1} / n!
    let x2 = x * x;
    for n in 0..400 {
        let add = term / (2 * n + 1) as f64;
        let y = add - comp;
        let t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        term *= -x2 / (n + 1) as f64;
        if add.abs() < 1e-18 * sum.abs() && n > 2 {
            break;
        }
    }
    std::f64::consts::FRAC_2_SQRT_PI * sum
}

// erfc(x) = e^{-x²}/√π · 1/(x + (1/2)/(x + 1/(x + (3/2)/(x + ...)))),
// evaluated bottom-up from a deep truncation
fn erfc_continued_fraction(x: f64) -> f64 {
    let mut tail = x;
    for k in (1..=200).rev() {
        tail = x + (k as f64 / 2.0) / tail;
    }
    (-x * x).exp() / std::f64::consts::PI.sqrt() / tail
}

/// Semi-wave speed by finite-difference collocation of
/// q'' - c q' + f(q) = 0 on [0, z_max], q(0) = 0, q(z_max) = 1,
/// μ q'(0) = c, with Newton on (q, c). Returns c at the given resolution.
pub fn collocation_speed(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, mu: f64, z_max: f64, n: usize) -> f64 {
    let dz = z_max / n as f64;
    // unknowns q_1..q_{n-1}, then c
    let m = n - 1;
    let mut q: Vec<f64> = (0..=n).map(|j| (j as f64 * dz / 3.0).tanh()).collect();
    q[n] = 1.0;
    let mut c = 0.3;
    for _ in 0..100 {
        // residuals r_j for j = 1..n-1 and the flux row
        let mut r = vec![0.0; m];
        let mut lower = vec![0.0; m];
        let mut diag = vec![0.0; m];
        let mut upper = vec![0.0; m];
        let mut col_c = vec![0.0; m];
        for j in 1..n {
            let k = j - 1;
            let d2 = (q[j + 1] - 2.0 * q[j] + q[j - 1]) / (dz * dz);
            let d1 = (q[j + 1] - q[j - 1]) / (2.0 * dz);
            r[k] = d2 - c * d1 + f(q[j]);
            lower[k] = 1.0 / (dz * dz) + c / (2.0 * dz);
            diag[k] = -2.0 / (dz * dz) + df(q[j]);
            upper[k] = 1.0 / (dz * dz) - c / (2.0 * dz);
            col_c[k] = -d1;
        }
        // flux row: μ(-3q0 + 4q1 - q2)/(2dz) - c = 0, second order
        let flux = mu * (-3.0 * q[0] + 4.0 * q[1] - q[2]) / (2.0 * dz) - c;
        let row_q1 = 4.0 * mu / (2.0 * dz);
        let row_q2 = -mu / (2.0 * dz);
        // bordered solve: T x = -r, T y = col_c, then dc from the flux row
        let x = thomas(&lower, &diag, &upper, &r.iter().map(|v| -v).collect::<Vec<_>>());
        let y = thomas(&lower, &diag, &upper, &col_c);
        // dq = x - y dc; flux row: row_q1 dq1 + row_q2 dq2 - dc = -flux
        let a = row_q1 * x[0] + row_q2 * x[1];
        let b = row_q1 * y[0] + row_q2 * y[1];
        let dc = (a + flux) / (b + 1.0);
        for k in 0..m {
            q[k + 1] += x[k] - y[k] * dc;
        }
        c += dc;
        if dc.abs() < 1e-14 && x.iter().map(|v| v.abs()).fold(0.0, f64::max) < 1e-12 {
            break;
        }
    }
    c
}

/// Richardson-extrapolated collocation speed from n and 2n points.
pub fn collocation_speed_extrapolated(f: &dyn Fn(f64) -> f64, df: &dyn Fn(f64) -> f64, mu: f64) -> f64 {
    let z = 60.0;
    let c1 = collocation_speed(f, df, mu, z, 6000);
    let c2 = collocation_speed(f, df, mu, z, 12000);
    c2 + (c2 - c1) / 3.0
}

fn thomas(a: &[f64], b: &[f64], c: &[f64], d: &[f64]) -> Vec<f64> {
    let n = b.len();
    let mut cp = vec![0.0; n];
    let mut dp = vec![0.0; n];
    cp[0] = c[0] / b[0];
    dp[0] = d[0] / b[0];
    for i in 1..n {
        let den = b[i] - a[i] * cp[i - 1];
        cp[i] = c[i] / den;
        dp[i] = (d[i] - a[i] * dp[i - 1]) / den;
    }
    let mut x = vec![0.0; n];
    x[n - 1] = dp[n - 1];
    for i in (0..n - 1).rev() {
        x[i] = dp[i] - cp[i] * x[i + 1];
    }
    x
}

/// Composite Gauss-Legendre (5 points) on [a, b] with `panels` panels.
pub fn gauss(f: &dyn Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    const X: [f64; 5] = [
        0.0,
        -0.538_469_310_105_683_1,
        0.538_469_310_105_683_1,
        -0.906_179_845_938_664,
        0.906_179_845_938_664,
    ];
    const W: [f64; 5] = [
        0.568_888_888_888_888_9,
        0.478_628_670_499_366_5,
        0.478_628_670_499_366_5,
        0.236_926_885_056_189_1,
        0.236_926_885_056_189_1,
    ];
    let h = (b - a) / panels as f64;
    let mut s = 0.0;
    for p in 0..panels {
        let mid = a + (p as f64 + 0.5) * h;
        for k in 0..5 {
            s += W[k] * f(mid + 0.5 * h * X[k]);
        }
    }
    0.5 * h * s
}

pub fn logistic(u: f64) -> f64 {
    u * (1.0 - u)
}

pub fn logistic_prime(u: f64) -> f64 {
    1.0 - 2.0 * u
}

pub fn cubic(a: f64) -> impl Fn(f64) -> f64 {
    move |u| u * (1.0 - u) * (u - a)
}

pub fn cubic_prime(a: f64) -> impl Fn(f64) -> f64 {
    move |u| -3.0 * u * u + 2.0 * (1.0 + a) * u - a
}
