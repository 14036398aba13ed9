/// Tridiagonal system with reusable scratch space (Thomas algorithm).
#[derive(Debug, Clone, Default)]
pub struct Tridiagonal {
    c_prime: Vec<f64>,
}

impl Tridiagonal {
    pub fn new() -> Self {
        Self::default()
    }

    /// Solves in place: `rhs` becomes the solution.
    /// `lower[i]` couples row i to i-1, `upper[i]` couples row i to i+1.
    pub fn solve(&mut self, lower: &[f64], diag: &[f64], upper: &[f64], rhs: &mut [f64]) {
        let n = diag.len();
        debug_assert!(lower.len() == n && upper.len() == n && rhs.len() == n);
        if n == 0 {
            return;
        }
        self.c_prime.resize(n, 0.0);
        let cp = &mut self.c_prime;
        let mut denom = diag[0];
        cp[0] = upper[0] / denom;
        rhs[0] /= denom;
        for i in 1..n {
            denom = diag[i] - lower[i] * cp[i - 1];
            cp[i] = upper[i] / denom;
            rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
        }
        for i in (0..n - 1).rev() {
            rhs[i] -= cp[i] * rhs[i + 1];
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn solves_small_system() {
        let lower = [0.0, -1.0, -1.0, -1.0];
        let diag = [4.0, 4.0, 4.0, 4.0];
        let upper = [-1.0, -1.0, -1.0, 0.0];
        let x = [1.0, -2.0, 3.0, 0.5];
        let mut b: Vec<f64> = (0..4)
            .map(|i| {
                let mut s = diag[i] * x[i];
                if i > 0 {
                    s += lower[i] * x[i - 1];
                }
                if i < 3 {
                    s += upper[i] * x[i + 1];
                }
                s
            })
            .collect();
        Tridiagonal::new().solve(&lower, &diag, &upper, &mut b);
        for i in 0..4 {
            assert!((b[i] - x[i]).abs() < 1e-14);
        }
    }
}
