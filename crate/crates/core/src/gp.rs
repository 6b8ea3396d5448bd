//! Small Gaussian-process regression with a squared-exponential kernel and
//! the expected-improvement acquisition (minimization).

use alloc::vec::Vec;

use crate::error::{domain_err, Error, Result};
use crate::math;

const JITTER_START: f64 = 1e-10;
const JITTER_MAX: f64 = 1e-2;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kernel {
    /// Length-scale in input units.
    pub length_scale: f64,
    /// Prior variance of the (standardized) signal.
    pub signal_var: f64,
}

impl Kernel {
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        let d2: f64 = a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum();
        self.signal_var * math::exp(-0.5 * d2 / (self.length_scale * self.length_scale))
    }
}

/// Lower Cholesky factor of a symmetric positive-definite `n×n` matrix.
pub fn cholesky(a: &[f64], n: usize) -> Option<Vec<f64>> {
    let mut l = alloc::vec![0.0; n * n];
    for i in 0..n {
        for j in 0..=i {
            let mut s = a[i * n + j];
            for k in 0..j {
                s -= l[i * n + k] * l[j * n + k];
            }
            if i == j {
                if !(s > 0.0) {
                    return None;
                }
                l[i * n + i] = math::sqrt(s);
            } else {
                l[i * n + j] = s / l[j * n + j];
            }
        }
    }
    Some(l)
}

fn solve_lower(l: &[f64], n: usize, b: &mut [f64]) {
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l[i * n + k] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

fn solve_upper_t(l: &[f64], n: usize, b: &mut [f64]) {
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in i + 1..n {
            s -= l[k * n + i] * b[k];
        }
        b[i] = s / l[i * n + i];
    }
}

#[derive(Debug, Clone)]
pub struct GaussianProcess {
    kernel: Kernel,
    x: Vec<Vec<f64>>,
    chol: Vec<f64>,
    alpha: Vec<f64>,
    y_mean: f64,
    y_scale: f64,
    /// Jitter that was needed on top of the noise term.
    pub jitter: f64,
}

impl GaussianProcess {
    /// Fits to observations `y` at inputs `x`; targets are standardized.
    ///
    /// `noise_var` is the observation-noise variance in standardized units.
    /// When the kernel matrix is not numerically positive definite, diagonal
    /// jitter grows by decades up to 1e-2 before giving up.
    pub fn fit(x: Vec<Vec<f64>>, y: &[f64], kernel: Kernel, noise_var: f64) -> Result<Self> {
        let n = x.len();
        if n == 0 || n != y.len() {
            return Err(domain_err!("{} inputs for {} targets", n, y.len()));
        }
        let y_mean = y.iter().sum::<f64>() / n as f64;
        let var = y.iter().map(|v| (v - y_mean) * (v - y_mean)).sum::<f64>() / n as f64;
        let y_scale = if var > 0.0 { math::sqrt(var) } else { 1.0 };
        let mut k = alloc::vec![0.0; n * n];
        for i in 0..n {
            for j in 0..=i {
                let v = kernel.eval(&x[i], &x[j]);
                k[i * n + j] = v;
                k[j * n + i] = v;
            }
        }
        let mut jitter = 0.0;
        let chol = loop {
            let mut a = k.clone();
            for i in 0..n {
                a[i * n + i] += noise_var + jitter;
            }
            if let Some(l) = cholesky(&a, n) {
                break l;
            }
            jitter = if jitter == 0.0 { JITTER_START } else { jitter * 10.0 };
            if jitter > JITTER_MAX {
                return Err(Error::Numeric(alloc::format!(
                    "kernel matrix of {n} points is singular even with jitter {JITTER_MAX}"
                )));
            }
        };
        let mut alpha: Vec<f64> = y.iter().map(|v| (v - y_mean) / y_scale).collect();
        solve_lower(&chol, n, &mut alpha);
        solve_upper_t(&chol, n, &mut alpha);
        Ok(GaussianProcess {
            kernel,
            x,
            chol,
            alpha,
            y_mean,
            y_scale,
            jitter,
        })
    }

    pub fn len(&self) -> usize {
        self.x.len()
    }

    pub fn is_empty(&self) -> bool {
        self.x.is_empty()
    }

    /// Posterior mean and standard deviation of the latent function.
    pub fn predict(&self, at: &[f64]) -> (f64, f64) {
        let n = self.x.len();
        let mut k: Vec<f64> = self.x.iter().map(|xi| self.kernel.eval(xi, at)).collect();
        let mean: f64 = k.iter().zip(&self.alpha).map(|(a, b)| a * b).sum();
        solve_lower(&self.chol, n, &mut k);
        let explained: f64 = k.iter().map(|v| v * v).sum();
        let var = (self.kernel.signal_var - explained).max(0.0);
        (self.y_mean + self.y_scale * mean, self.y_scale * math::sqrt(var))
    }
}

/// Standard normal density.
pub fn normal_pdf(z: f64) -> f64 {
    math::exp(-0.5 * z * z) / math::sqrt(2.0 * core::f64::consts::PI)
}

/// Standard normal distribution function.
pub fn normal_cdf(z: f64) -> f64 {
    0.5 * math::erfc(-z / core::f64::consts::SQRT_2)
}

/// Expected improvement below `best` of a Gaussian with `mean` and `std`.
pub fn expected_improvement(mean: f64, std: f64, best: f64) -> f64 {
    let gain = best - mean;
    if std <= 0.0 {
        return gain.max(0.0);
    }
    let z = gain / std;
    gain * normal_cdf(z) + std * normal_pdf(z)
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Dense Gaussian elimination with partial pivoting.
    fn solve_dense(mut a: Vec<Vec<f64>>, mut b: Vec<f64>) -> Vec<f64> {
        let n = b.len();
        for col in 0..n {
            let piv = (col..n)
                .max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).unwrap())
                .unwrap();
            a.swap(col, piv);
            b.swap(col, piv);
            let (top, rest) = a.split_at_mut(col + 1);
            let pivot = &top[col];
            for (k, row) in rest.iter_mut().enumerate() {
                let f = row[col] / pivot[col];
                for (x, p) in row[col..].iter_mut().zip(&pivot[col..]) {
                    *x -= f * p;
                }
                b[col + 1 + k] -= f * b[col];
            }
        }
        let mut x = alloc::vec![0.0; n];
        for r in (0..n).rev() {
            let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
            x[r] = (b[r] - s) / a[r][r];
        }
        x
    }

    #[test]
    fn posterior_mean_matches_dense_solve() {
        let xs: Vec<Vec<f64>> = [0.05, 0.2, 0.33, 0.6, 0.9].iter().map(|&v| alloc::vec![v]).collect();
        let ys = [3.0, 1.0, 2.5, -1.0, 0.4];
        let kernel = Kernel {
            length_scale: 0.2,
            signal_var: 1.0,
        };
        let noise = 0.01;
        let gp = GaussianProcess::fit(xs.clone(), &ys, kernel, noise).unwrap();

        let mean = ys.iter().sum::<f64>() / 5.0;
        let sd = (ys.iter().map(|y| (y - mean) * (y - mean)).sum::<f64>() / 5.0).sqrt();
        let z: Vec<f64> = ys.iter().map(|y| (y - mean) / sd).collect();
        let kmat: Vec<Vec<f64>> = (0..5)
            .map(|i| {
                (0..5)
                    .map(|j| kernel.eval(&xs[i], &xs[j]) + if i == j { noise } else { 0.0 })
                    .collect()
            })
            .collect();
        let weights = solve_dense(kmat, z);
        for probe in [0.0, 0.27, 0.5, 0.75, 1.0] {
            let ks: Vec<f64> = xs.iter().map(|x| kernel.eval(x, &[probe])).collect();
            let expected = mean + sd * ks.iter().zip(&weights).map(|(a, b)| a * b).sum::<f64>();
            let (m, s) = gp.predict(&[probe]);
            assert!((m - expected).abs() < 1e-9, "{m} vs {expected}");
            assert!(s >= 0.0);
        }
    }

    #[test]
    fn duplicate_inputs_need_jitter_without_noise() {
        let xs = alloc::vec![alloc::vec![0.5], alloc::vec![0.5], alloc::vec![0.1]];
        let kernel = Kernel {
            length_scale: 0.3,
            signal_var: 1.0,
        };
        let gp = GaussianProcess::fit(xs, &[1.0, 1.2, 0.0], kernel, 0.0).unwrap();
        assert!(gp.jitter > 0.0);
    }

    #[test]
    fn expected_improvement_matches_quadrature() {
        for &(mean, std, best) in &[(1.0, 0.5, 0.8), (0.0, 2.0, 1.0), (3.0, 0.1, 2.0)] {
            // E[max(best - Y, 0)] by the midpoint rule over ±12σ.
            let n = 200_000;
            let (lo, hi) = (mean - 12.0 * std, mean + 12.0 * std);
            let h = (hi - lo) / n as f64;
            let mut q = 0.0;
            for i in 0..n {
                let y = lo + (i as f64 + 0.5) * h;
                q += (best - y).max(0.0) * normal_pdf((y - mean) / std) / std * h;
            }
            let ei = expected_improvement(mean, std, best);
            assert!((ei - q).abs() < 1e-7, "{ei} vs {q}");
        }
        assert_eq!(expected_improvement(1.0, 0.0, 2.0), 1.0);
        assert_eq!(expected_improvement(3.0, 0.0, 2.0), 0.0);
    }
}
