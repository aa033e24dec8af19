//! Log-Cesàro (Dixmier-type) functionals for Hardy-space commutators on S¹.
//!
//! The central object is the diagonal sequence d_l = ‖P g_l‖² with
//! g_l = [P, W](W·e_l) for the lacunary symbol W with coefficients 2^{−nβ} at
//! frequencies ±2ⁿ.  The crate evaluates d_l two independent ways — an exact
//! lattice sum over pairs of dyadic exponents, and a direct sparse matrix
//! computation — together with log-Cesàro means Λ_N = (Σ_{l≤N} x_l)/log(N+2),
//! general diagonal estimators built from products of commutators [P, a_i],
//! and a per-l report comparing the exact values against candidate analytic
//! lower bounds.

mod bounds;
mod gamma;
mod xi;

pub use bounds::{bound_report, BoundFlags, BoundReport, BoundReportOptions, BoundRow};
pub use gamma::{gamma_lattice_sum, pgl_matrix_oracle, GammaLatticeSum};
pub use xi::{
    xi2_lacunary_series, xi_diagonal_estimate, zeta_estimate, CesaroPoint, LogCesaroSeries,
    XiEstimate,
};

use thiserror::Error;

/// Errors from functional estimation.
#[derive(Debug, Error)]
pub enum DixmierError {
    #[error("negative entry x[{index}] = {value} in a log-Cesàro input; split signed sequences before averaging")]
    NegativeEntry { index: usize, value: f64 },
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error(
        "truncation n_max = {n_max} leaves relative tail {rel:.3e} > {tol:.1e} at l = {l}; \
         rerun with n_max >= {required}"
    )]
    TailTooLarge {
        l: u64,
        n_max: u32,
        rel: f64,
        tol: f64,
        required: u32,
    },
    #[error(transparent)]
    Symbol(#[from] symbol_lab::SymbolError),
}

/// Λ_N = (Σ_{k=0}^{N} x_k) / log(N+2), natural logarithm.
///
/// Rejects negative entries: the functional is defined on nonnegative
/// sequences, and signed sequences must be split by the caller.
pub fn log_cesaro(
    x: &[f64],
    n_list: &[usize],
    source: &str,
) -> Result<LogCesaroSeries, DixmierError> {
    for (index, &value) in x.iter().enumerate() {
        if !(value >= 0.0) {
            return Err(DixmierError::NegativeEntry { index, value });
        }
    }
    for &n in n_list {
        if n >= x.len() {
            return Err(DixmierError::BadParam(format!(
                "requested partial at N = {n} but only {} entries are available",
                x.len()
            )));
        }
    }
    Ok(xi::signed_partials(x, n_list, source))
}
