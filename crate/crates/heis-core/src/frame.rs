use crate::{HeisConfig, HeisError, HeisPoint};

/// Coefficients of the horizontal frame evaluated at a point.
///
/// The frame consists of the fields X_j = ∂/∂z_j + c_j(z) ∂/∂t for
/// j = 1..d together with the vertical field X₀ = ∂/∂t.  The vertical
/// coefficients c_j(z) = ½ Σ_k L_{kj} z_k are chosen left-invariant, which is
/// the sign convention under which the relations [X_j, X_k] = L_{jk} X₀ hold
/// exactly (see [`check_frame_commutators`]).  At z = 0 the frame reduces to
/// the standard Euclidean one.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameCoefficients {
    /// Coefficient of ∂/∂z_j in X_j; identically 1 in these coordinates.
    pub horizontal: Vec<f64>,
    /// Coefficient c_j(z) of ∂/∂t in X_j.
    pub vertical: Vec<f64>,
}

/// Evaluate the horizontal frame coefficients at `x`.
pub fn frame_coefficients(cfg: &HeisConfig, x: &HeisPoint) -> Result<FrameCoefficients, HeisError> {
    cfg.check_dim(x)?;
    let d = cfg.d();
    let vertical = (0..d)
        .map(|j| 0.5 * (0..d).map(|k| cfg.form_entry(k, j) * x.z[k]).sum::<f64>())
        .collect();
    Ok(FrameCoefficients {
        horizontal: vec![1.0; d],
        vertical,
    })
}

/// Result of the exact commutator verification.
#[derive(Debug, Clone)]
pub struct CommutatorReport {
    /// True when every pair satisfies [X_j, X_k] = L_{jk} X₀ exactly.
    pub ok: bool,
    /// Largest absolute defect over all pairs (exactly 0 on success).
    pub worst_defect: f64,
    /// Per-pair defects (j, k, |computed − L_{jk}|) for j < k.
    pub pairs: Vec<(usize, usize, f64)>,
}

/// Verify [X_j, X_k] = L_{jk} X₀ for all pairs by symbolic differentiation.
///
/// The vertical coefficients c_j(z) = ½ Σ_i L_{ij} z_i are affine in z, so the
/// commutator of X_j = ∂_{z_j} + c_j ∂_t and X_k = ∂_{z_k} + c_k ∂_t is the
/// vertical field with constant coefficient ∂_{z_j} c_k − ∂_{z_k} c_j
/// = ½ L_{jk} − ½ L_{kj} = L_{jk}.  The check evaluates these derivatives
/// exactly (they are entries of L) — no finite differences are involved.
pub fn check_frame_commutators(cfg: &HeisConfig) -> CommutatorReport {
    let d = cfg.d();
    let mut pairs = Vec::with_capacity(d * (d - 1) / 2);
    let mut worst: f64 = 0.0;
    for j in 0..d {
        for k in (j + 1)..d {
            // ∂_{z_j} c_k is the coefficient of z_j in c_k, i.e. ½ L_{jk}.
            let d_j_ck = 0.5 * cfg.form_entry(j, k);
            let d_k_cj = 0.5 * cfg.form_entry(k, j);
            let defect = ((d_j_ck - d_k_cj) - cfg.form_entry(j, k)).abs();
            worst = worst.max(defect);
            pairs.push((j, k, defect));
        }
    }
    CommutatorReport {
        ok: worst == 0.0,
        worst_defect: worst,
        pairs,
    }
}
