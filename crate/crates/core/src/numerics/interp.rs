/// Shape-preserving piecewise cubic (Fritsch–Carlson slopes, as in PCHIP).
/// Outside the knot range the interpolant continues linearly with the end slope.
#[derive(Debug, Clone, PartialEq)]
pub struct Pchip {
    xs: Vec<f64>,
    ys: Vec<f64>,
    ds: Vec<f64>,
}

impl Pchip {
    /// Knots must be strictly increasing, at least two of them.
    pub fn new(xs: Vec<f64>, ys: Vec<f64>) -> Option<Self> {
        let n = xs.len();
        if n < 2 || ys.len() != n || xs.windows(2).any(|w| !(w[1] > w[0])) {
            return None;
        }
        if xs.iter().chain(&ys).any(|v| !v.is_finite()) {
            return None;
        }
        let h: Vec<f64> = xs.windows(2).map(|w| w[1] - w[0]).collect();
        let delta: Vec<f64> = (0..n - 1).map(|k| (ys[k + 1] - ys[k]) / h[k]).collect();
        let mut ds = vec![0.0; n];
        if n == 2 {
            ds[0] = delta[0];
            ds[1] = delta[0];
        } else {
            for k in 1..n - 1 {
                if delta[k - 1] * delta[k] > 0.0 {
                    let w1 = 2.0 * h[k] + h[k - 1];
                    let w2 = h[k] + 2.0 * h[k - 1];
                    ds[k] = (w1 + w2) / (w1 / delta[k - 1] + w2 / delta[k]);
                }
            }
            ds[0] = end_slope(h[0], h[1], delta[0], delta[1]);
            ds[n - 1] = end_slope(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
        }
        Some(Self { xs, ys, ds })
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.ys)
    }

    fn segment(&self, x: f64) -> usize {
        let k = self.xs.partition_point(|&v| v <= x);
        k.clamp(1, self.xs.len() - 1) - 1
    }

    pub fn eval(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ys[0] + self.ds[0] * (x - self.xs[0]);
        }
        if x >= self.xs[n - 1] {
            return self.ys[n - 1] + self.ds[n - 1] * (x - self.xs[n - 1]);
        }
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let t3 = t2 * t;
        let h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
        let h10 = t3 - 2.0 * t2 + t;
        let h01 = -2.0 * t3 + 3.0 * t2;
        let h11 = t3 - t2;
        h00 * self.ys[k] + h10 * h * self.ds[k] + h01 * self.ys[k + 1] + h11 * h * self.ds[k + 1]
    }

    pub fn derivative(&self, x: f64) -> f64 {
        let n = self.xs.len();
        if x <= self.xs[0] {
            return self.ds[0];
        }
        if x >= self.xs[n - 1] {
            return self.ds[n - 1];
        }
        let k = self.segment(x);
        let h = self.xs[k + 1] - self.xs[k];
        let t = (x - self.xs[k]) / h;
        let t2 = t * t;
        let d00 = 6.0 * t2 - 6.0 * t;
        let d10 = 3.0 * t2 - 4.0 * t + 1.0;
        let d01 = -6.0 * t2 + 6.0 * t;
        let d11 = 3.0 * t2 - 2.0 * t;
        (d00 * self.ys[k] + d01 * self.ys[k + 1]) / h + d10 * self.ds[k] + d11 * self.ds[k + 1]
    }

    /// Integral over [a, b] with a, b inside the knot range; exact for the
    /// piecewise cubic (two-point Gauss rule per segment).
    pub fn integral(&self, a: f64, b: f64) -> f64 {
        if b < a {
            return -self.integral(b, a);
        }
        let g = 0.5 / 3f64.sqrt();
        let inner = self.xs.iter().copied().filter(|&x| x > a && x < b);
        let mut s = 0.0;
        let mut lo = a;
        // The end segments extend linearly, still one polynomial per piece.
        for hi in inner.chain(std::iter::once(b)) {
            let m = 0.5 * (lo + hi);
            let w = hi - lo;
            s += 0.5 * w * (self.eval(m - g * w) + self.eval(m + g * w));
            lo = hi;
        }
        s
    }
}

fn end_slope(h0: f64, h1: f64, d0: f64, d1: f64) -> f64 {
    let d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if d.signum() != d0.signum() {
        0.0
    } else if d0.signum() != d1.signum() && d.abs() > 3.0 * d0.abs() {
        3.0 * d0
    } else {
        d
    }
}

/// Quintic Hermite interpolant from values, first and second derivatives.
#[derive(Debug, Clone)]
pub struct HermiteQuintic {
    xs: Vec<f64>,
    y: Vec<f64>,
    dy: Vec<f64>,
    ddy: Vec<f64>,
}

impl HermiteQuintic {
    pub fn new(xs: Vec<f64>, y: Vec<f64>, dy: Vec<f64>, ddy: Vec<f64>) -> Self {
        assert!(xs.len() >= 2 && y.len() == xs.len() && dy.len() == xs.len() && ddy.len() == xs.len());
        Self { xs, y, dy, ddy }
    }

    pub fn first(&self) -> f64 {
        self.xs[0]
    }

    pub fn last(&self) -> f64 {
        self.xs[self.xs.len() - 1]
    }

    pub fn knots(&self) -> (&[f64], &[f64]) {
        (&self.xs, &self.y)
    }

    fn locate(&self, x: f64) -> (usize, f64, f64) {
        let k = self.xs.partition_point(|&v| v <= x).clamp(1, self.xs.len() - 1) - 1;
        let h = self.xs[k + 1] - self.xs[k];
        (k, h, (x - self.xs[k]) / h)
    }

    /// Value and first derivative at x (clamped to the knot range).
    pub fn eval_with_slope(&self, x: f64) -> (f64, f64) {
        let x = x.clamp(self.first(), self.last());
        let (k, h, t) = self.locate(x);
        let t2 = t * t;
        let t3 = t2 * t;
        let t4 = t3 * t;
        let t5 = t4 * t;
        let b = [
            1.0 - 10.0 * t3 + 15.0 * t4 - 6.0 * t5,
            t - 6.0 * t3 + 8.0 * t4 - 3.0 * t5,
            0.5 * (t2 - 3.0 * t3 + 3.0 * t4 - t5),
            0.5 * (t3 - 2.0 * t4 + t5),
            -4.0 * t3 + 7.0 * t4 - 3.0 * t5,
            10.0 * t3 - 15.0 * t4 + 6.0 * t5,
        ];
        let db = [
            -30.0 * t2 + 60.0 * t3 - 30.0 * t4,
            1.0 - 18.0 * t2 + 32.0 * t3 - 15.0 * t4,
            0.5 * (2.0 * t - 9.0 * t2 + 12.0 * t3 - 5.0 * t4),
            0.5 * (3.0 * t2 - 8.0 * t3 + 5.0 * t4),
            -12.0 * t2 + 28.0 * t3 - 15.0 * t4,
            30.0 * t2 - 60.0 * t3 + 30.0 * t4,
        ];
        let c = [
            self.y[k],
            h * self.dy[k],
            h * h * self.ddy[k],
            h * h * self.ddy[k + 1],
            h * self.dy[k + 1],
            self.y[k + 1],
        ];
        let v: f64 = b.iter().zip(&c).map(|(a, b)| a * b).sum();
        let d: f64 = db.iter().zip(&c).map(|(a, b)| a * b).sum();
        (v, d / h)
    }

    pub fn eval(&self, x: f64) -> f64 {
        self.eval_with_slope(x).0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pchip_reproduces_knots_and_stays_monotone() {
        let xs = vec![0.0, 0.5, 1.0, 2.0, 3.0];
        let ys = vec![0.0, 0.1, 0.9, 1.0, 1.0];
        let p = Pchip::new(xs.clone(), ys.clone()).unwrap();
        for (x, y) in xs.iter().zip(&ys) {
            assert!((p.eval(*x) - y).abs() < 1e-15);
        }
        let mut prev = p.eval(0.0);
        for i in 1..=300 {
            let v = p.eval(3.0 * i as f64 / 300.0);
            assert!(v >= prev - 1e-15);
            prev = v;
        }
    }

    #[test]
    fn pchip_integral_of_cubic_pieces_is_exact() {
        let xs: Vec<f64> = (0..11).map(|i| i as f64 * 0.1).collect();
        let ys: Vec<f64> = xs.iter().map(|x| x * x).collect();
        let p = Pchip::new(xs, ys).unwrap();
        let fine = {
            let n = 20000;
            let h = 1.0 / n as f64;
            (0..n).map(|i| p.eval((i as f64 + 0.5) * h) * h).sum::<f64>()
        };
        assert!((p.integral(0.0, 1.0) - fine).abs() < 1e-8);
        assert!((p.integral(0.13, 0.77) + p.integral(0.77, 0.13)).abs() < 1e-15);
    }

    #[test]
    fn quintic_is_exact_for_quintics() {
        let f = |x: f64| x.powi(5) - 2.0 * x.powi(3) + x;
        let df = |x: f64| 5.0 * x.powi(4) - 6.0 * x * x + 1.0;
        let ddf = |x: f64| 20.0 * x.powi(3) - 12.0 * x;
        let xs = vec![0.0, 0.7, 1.5];
        let q = HermiteQuintic::new(
            xs.clone(),
            xs.iter().map(|&x| f(x)).collect(),
            xs.iter().map(|&x| df(x)).collect(),
            xs.iter().map(|&x| ddf(x)).collect(),
        );
        for i in 0..=50 {
            let x = 1.5 * i as f64 / 50.0;
            let (v, d) = q.eval_with_slope(x);
            assert!((v - f(x)).abs() < 1e-12);
            assert!((d - df(x)).abs() < 1e-11);
        }
    }
}
