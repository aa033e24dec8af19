use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::DixmierError;

/// Exact evaluation of ‖P g_l‖², g_l = [P, W](W·e_l), as a lattice sum over
/// dyadic exponent pairs, together with a rigorous truncation tail bound.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GammaLatticeSum {
    pub l: u64,
    pub beta: f64,
    /// All dyadic exponents are truncated at this value (inclusive).
    pub n_max: u32,
    pub value: f64,
    /// Upper bound on the mass discarded by the truncation (absolute).
    pub tail_bound: f64,
    /// Number of admissible (n, m) pairs.
    pub term_count: usize,
}

fn check_params(beta: f64, n_max: u32) -> Result<(), DixmierError> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(DixmierError::BadParam(format!(
            "beta must lie in (0, 1], got {beta}"
        )));
    }
    if n_max == 0 || n_max > 120 {
        return Err(DixmierError::BadParam(format!(
            "n_max must lie in [1, 120], got {n_max}"
        )));
    }
    Ok(())
}

/// Smallest m with 2^m ≥ l+1.
fn m_min(l: u64) -> u32 {
    let mut m = 0u32;
    while (1u128 << m) < (l as u128 + 1) {
        m += 1;
    }
    m
}

/// ‖P g_l‖² with all dyadic exponents truncated at n_max.
///
/// Expanding g_l = [P, W](W·e_l) in the Fourier basis, only the branch
/// W·e_l → e_{l−2^m} with 2^m ≥ l+1 (a negative frequency) survives both the
/// commutator and the final projection, and contributes
/// w_m·w_n·e_{2ⁿ−2^m+l} for every n with 2ⁿ ≥ 2^m − l, where w_j = 2^{−jβ}.
/// Grouping pairs (n, m) by the difference 2ⁿ−2^m (distinct nonzero
/// differences of powers of two are uniquely represented; the zero difference
/// collects all n = m) and summing squared group totals gives the norm.
///
/// The enumeration runs in fixed (m, n) order for bitwise reproducibility.
pub fn gamma_lattice_sum(l: u64, beta: f64, n_max: u32) -> Result<GammaLatticeSum, DixmierError> {
    check_params(beta, n_max)?;
    let mut groups: BTreeMap<i128, f64> = BTreeMap::new();
    let mut term_count = 0usize;
    for m in m_min(l)..=n_max {
        let pm = 1i128 << m;
        let wm = 2f64.powf(-(m as f64) * beta);
        for n in 0..=n_max {
            let pn = 1i128 << n;
            if pn < pm - l as i128 {
                continue;
            }
            let wn = 2f64.powf(-(n as f64) * beta);
            *groups.entry(pn - pm).or_insert(0.0) += wm * wn;
            term_count += 1;
        }
    }
    let value: f64 = groups.values().map(|c| c * c).sum();
    Ok(GammaLatticeSum {
        l,
        beta,
        n_max,
        value,
        tail_bound: tail_bound(l, beta, n_max),
        term_count,
    })
}

/// Rigorous upper bound on the mass the truncation discards.
///
/// With q = 2^{−2β} and A = Σ_{m ≥ m_min} q^m the full diagonal weight, the
/// infinite sum exceeds the truncated one by (i) the zero-difference square
/// A² − A_T², and (ii) singleton terms q^n·q^m with n or m beyond n_max,
/// dominated by geometric series.
pub fn tail_bound(l: u64, beta: f64, n_max: u32) -> f64 {
    let q = 2f64.powf(-2.0 * beta);
    let geom = 1.0 / (1.0 - q);
    let m0 = m_min(l);
    let a = q.powi(m0 as i32) * geom;
    let a_t = if m0 > n_max {
        0.0
    } else {
        (m0..=n_max).map(|m| q.powi(m as i32)).sum::<f64>()
    };
    let excluded_m = a - a_t; // Σ over m > n_max with 2^m ≥ l+1.
    let excluded_n = q.powi(n_max as i32 + 1) * geom; // Σ over n > n_max.
    (a - a_t) * (a + a_t) + excluded_m * geom + excluded_n * a
}

/// Smallest n_max whose tail bound is below `tol` relative to `value`.
pub(crate) fn required_n_max(l: u64, beta: f64, value: f64, tol: f64) -> u32 {
    (1..=120)
        .find(|&n| tail_bound(l, beta, n) <= tol * value)
        .unwrap_or(120)
}

/// ‖P g_l‖² computed directly: build the truncated lacunary symbol, apply the
/// multiplication and the commutator as exact sparse convolutions, project,
/// and sum squared coefficients.
///
/// This touches none of the lattice-sum code and serves as its independent
/// oracle: both evaluate the identical finite object, so they must agree to
/// near machine precision.
pub fn pgl_matrix_oracle(l: u64, beta: f64, n_max: u32) -> Result<f64, DixmierError> {
    check_params(beta, n_max)?;
    if n_max > 20 {
        return Err(DixmierError::BadParam(format!(
            "matrix oracle supports n_max <= 20 (coefficient support 2^n_max), got {n_max}"
        )));
    }
    // W = Σ_n w_n (e_{2ⁿ} + e_{−2ⁿ}) as (frequency, weight) pairs.
    let w: Vec<(i64, f64)> = (0..=n_max)
        .flat_map(|nn| {
            let weight = 2f64.powf(-(nn as f64) * beta);
            let f = 1i64 << nn;
            [(f, weight), (-f, weight)]
        })
        .collect();

    // u = W·e_l.
    let mut u: BTreeMap<i64, f64> = BTreeMap::new();
    for &(q, c) in &w {
        *u.entry(l as i64 + q).or_insert(0.0) += c;
    }

    // g = [P, W]u; on e_j the symbol frequency q contributes
    // (χ(j+q ≥ 0) − χ(j ≥ 0))·e_{j+q}.
    let mut g: BTreeMap<i64, f64> = BTreeMap::new();
    for (&j, &c) in &u {
        for &(q, wq) in &w {
            let jump = i32::from(j + q >= 0) - i32::from(j >= 0);
            if jump != 0 {
                *g.entry(j + q).or_insert(0.0) += f64::from(jump) * c * wq;
            }
        }
    }

    Ok(g.iter()
        .filter(|(&j, _)| j >= 0)
        .map(|(_, c)| c * c)
        .sum())
}
