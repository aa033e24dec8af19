//! Minimal limited-memory BFGS minimizer with Armijo backtracking.
//!
//! Serves the augmented-Lagrangian inner iterations of the distance solver;
//! the objectives there are smooth with cheap analytic gradients, so a plain
//! two-loop recursion with backtracking line search is sufficient.

use std::collections::VecDeque;

#[derive(Debug, Clone)]
pub struct LbfgsParams {
    /// Number of curvature pairs retained.
    pub memory: usize,
    pub max_iter: usize,
    /// Stop when the sup-norm of the gradient falls below this.
    pub gtol: f64,
    /// Stop when the relative objective decrease falls below this.
    pub ftol: f64,
}

impl Default for LbfgsParams {
    fn default() -> Self {
        LbfgsParams {
            memory: 10,
            max_iter: 800,
            gtol: 1e-12,
            ftol: 1e-16,
        }
    }
}

#[derive(Debug, Clone)]
pub struct LbfgsResult {
    pub x: Vec<f64>,
    /// Final objective value, gradient sup-norm, and iteration count; kept
    /// for diagnostics and the module's own tests.
    #[allow(dead_code)]
    pub value: f64,
    #[allow(dead_code)]
    pub grad_sup_norm: f64,
    #[allow(dead_code)]
    pub iterations: usize,
}

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(u, v)| u * v).sum()
}

fn sup_norm(a: &[f64]) -> f64 {
    a.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Minimize `f` from `x0`.  The closure writes the gradient into its second
/// argument and returns the objective value.
pub fn minimize<F>(mut f: F, x0: Vec<f64>, params: &LbfgsParams) -> LbfgsResult
where
    F: FnMut(&[f64], &mut [f64]) -> f64,
{
    let n = x0.len();
    let mut x = x0;
    let mut grad = vec![0.0; n];
    let mut value = f(&x, &mut grad);

    let mut pairs: VecDeque<(Vec<f64>, Vec<f64>, f64)> = VecDeque::new(); // (s, y, 1/yᵀs)
    let mut dir = vec![0.0; n];
    let mut x_new = vec![0.0; n];
    let mut grad_new = vec![0.0; n];
    let mut iterations = 0;

    for iter in 0..params.max_iter {
        iterations = iter;
        let gnorm = sup_norm(&grad);
        if gnorm <= params.gtol {
            break;
        }

        // Two-loop recursion for dir = -H·grad.
        dir.copy_from_slice(&grad);
        let mut alphas = Vec::with_capacity(pairs.len());
        for (s, y, rho) in pairs.iter().rev() {
            let alpha = rho * dot(s, &dir);
            for (d, yi) in dir.iter_mut().zip(y) {
                *d -= alpha * yi;
            }
            alphas.push(alpha);
        }
        if let Some((s, y, _)) = pairs.back() {
            let gamma = dot(s, y) / dot(y, y).max(f64::MIN_POSITIVE);
            for d in dir.iter_mut() {
                *d *= gamma;
            }
        }
        for ((s, y, rho), alpha) in pairs.iter().zip(alphas.iter().rev()) {
            let beta = rho * dot(y, &dir);
            for (d, si) in dir.iter_mut().zip(s) {
                *d += (alpha - beta) * si;
            }
        }
        for d in dir.iter_mut() {
            *d = -*d;
        }

        let mut slope = dot(&grad, &dir);
        if !(slope < 0.0) {
            // Fall back to steepest descent if curvature info is unusable.
            for (d, g) in dir.iter_mut().zip(&grad) {
                *d = -g;
            }
            slope = -dot(&grad, &grad);
            pairs.clear();
            if slope == 0.0 {
                break;
            }
        }

        // Armijo backtracking.
        let mut step = if pairs.is_empty() {
            (1.0 / (1.0 + gnorm)).min(1.0)
        } else {
            1.0
        };
        let mut accepted = false;
        let mut value_new = value;
        for _ in 0..60 {
            for ((xn, xo), d) in x_new.iter_mut().zip(&x).zip(&dir) {
                *xn = xo + step * d;
            }
            value_new = f(&x_new, &mut grad_new);
            if value_new <= value + 1e-4 * step * slope {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }

        let mut s = vec![0.0; n];
        let mut y = vec![0.0; n];
        for i in 0..n {
            s[i] = x_new[i] - x[i];
            y[i] = grad_new[i] - grad[i];
        }
        let ys = dot(&y, &s);
        if ys > 1e-10 * dot(&y, &y).sqrt() * dot(&s, &s).sqrt() {
            if pairs.len() == params.memory {
                pairs.pop_front();
            }
            pairs.push_back((s, y, 1.0 / ys));
        }

        let decrease = value - value_new;
        x.copy_from_slice(&x_new);
        grad.copy_from_slice(&grad_new);
        let stop = decrease.abs() <= params.ftol * (1.0 + value_new.abs());
        value = value_new;
        if stop {
            break;
        }
    }

    LbfgsResult {
        grad_sup_norm: sup_norm(&grad),
        x,
        value,
        iterations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimizes_quadratic() {
        let res = minimize(
            |x, g| {
                g[0] = 2.0 * (x[0] - 3.0);
                g[1] = 8.0 * (x[1] + 1.0);
                (x[0] - 3.0).powi(2) + 4.0 * (x[1] + 1.0).powi(2)
            },
            vec![0.0, 0.0],
            &LbfgsParams::default(),
        );
        assert!((res.x[0] - 3.0).abs() < 1e-8);
        assert!((res.x[1] + 1.0).abs() < 1e-8);
    }

    #[test]
    fn minimizes_rosenbrock() {
        let res = minimize(
            |x, g| {
                let (a, b) = (x[0], x[1]);
                g[0] = -2.0 * (1.0 - a) - 400.0 * a * (b - a * a);
                g[1] = 200.0 * (b - a * a);
                (1.0 - a).powi(2) + 100.0 * (b - a * a).powi(2)
            },
            vec![-1.2, 1.0],
            &LbfgsParams {
                max_iter: 2000,
                ..Default::default()
            },
        );
        assert!((res.x[0] - 1.0).abs() < 1e-6, "{:?}", res);
        assert!((res.x[1] - 1.0).abs() < 1e-6);
    }
}
