use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use symbol_lab::CircleSymbol;

use crate::ops::{calderon_d, TruncatedOperator};
use crate::HardyError;

/// Power-iteration operator-norm estimate on A*A.
///
/// Converges when consecutive estimates differ by less than `tol` relatively;
/// exceeding `max_iter` without convergence is reported as stagnation with
/// the last iterate attached.
pub fn operator_norm(
    op: &TruncatedOperator,
    tol: f64,
    max_iter: usize,
    seed: u64,
) -> Result<(f64, usize), HardyError> {
    let dim = op.dim();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v: Vec<Complex64> = (0..dim)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    normalize(&mut v);
    let mut sigma = 0.0f64;
    for it in 1..=max_iter {
        let av = op.matvec(&v)?;
        let sigma_new = l2(&av);
        if sigma_new < 1e-300 {
            return Ok((0.0, it));
        }
        let mut w = op.matvec_adj(&av)?;
        let nw = l2(&w);
        if nw < 1e-300 {
            return Ok((sigma_new, it));
        }
        for c in w.iter_mut() {
            *c /= nw;
        }
        v = w;
        if (sigma_new - sigma).abs() <= tol * sigma_new {
            return Ok((sigma_new, it));
        }
        sigma = sigma_new;
    }
    Err(HardyError::PowerIterationStagnated {
        iters: max_iter,
        last: sigma,
    })
}

fn l2(v: &[Complex64]) -> f64 {
    v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

fn normalize(v: &mut [Complex64]) {
    let n = l2(v);
    if n > 0.0 {
        for c in v.iter_mut() {
            *c /= n;
        }
    }
}

/// One truncation level of the boundedness probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalderonEntry {
    pub n: usize,
    pub norm: f64,
    pub iterations: usize,
}

/// Norm sequence of the model commutator across truncations, with a
/// log-log growth fit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalderonReport {
    pub entries: Vec<CalderonEntry>,
    /// Least-squares slope of log‖M_N‖ against log N (needs ≥ 2 levels).
    pub growth_exponent: Option<f64>,
    pub seed: u64,
}

/// Estimate ‖[D, f]‖ with D the first-order model operator, for each window
/// size in `n_list`, and fit the growth exponent of the norm in N.
///
/// Bounded (Lipschitz-type) symbols plateau; rough symbols grow with a rate
/// reflecting their missing smoothness.
pub fn calderon_norm_probe(
    f: &CircleSymbol,
    n_list: &[usize],
    seed: u64,
) -> Result<CalderonReport, HardyError> {
    if n_list.is_empty() {
        return Err(HardyError::BadParam("empty truncation list".into()));
    }
    let mut entries = Vec::with_capacity(n_list.len());
    for (i, &n) in n_list.iter().enumerate() {
        if n < 2 {
            return Err(HardyError::BadParam(format!("window {n} too small")));
        }
        let op = calderon_d(f, n);
        let (norm, iterations) = operator_norm(&op, 1e-6, 10_000, seed.wrapping_add(i as u64))?;
        entries.push(CalderonEntry { n, norm, iterations });
    }
    let growth_exponent = if entries.len() >= 2 && entries.iter().all(|e| e.norm > 0.0) {
        let pts: Vec<(f64, f64)> = entries
            .iter()
            .map(|e| ((e.n as f64).ln(), e.norm.ln()))
            .collect();
        let n = pts.len() as f64;
        let sx: f64 = pts.iter().map(|p| p.0).sum();
        let sy: f64 = pts.iter().map(|p| p.1).sum();
        let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
        let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
        Some((n * sxy - sx * sy) / (n * sxx - sx * sx))
    } else {
        None
    };
    Ok(CalderonReport {
        entries,
        growth_exponent,
        seed,
    })
}
