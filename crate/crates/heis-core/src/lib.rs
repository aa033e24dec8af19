//! Exact algebra of the model Heisenberg group ℝ^{d+1}.
//!
//! Points are written x = (t, z) with a vertical coordinate t ∈ ℝ and a
//! horizontal coordinate z ∈ ℝ^d.  The group is fixed by an antisymmetric
//! d×d form L through the product
//!
//! ```text
//! (t, z) · (t', z') = (t + t' + ½ L(z, z'), z + z'),    L(z, z') = zᵀ L z'.
//! ```
//!
//! The crate provides the group operations, the anisotropic dilations
//! λ.(t, z) = (λ²t, λz), the Koranyi gauge (t² + |z|⁴)^{1/4}, the two
//! quasi-metrics built from it, and the left-invariant horizontal frame
//! together with an exact (symbolic) check of its commutation relations.
//!
//! All operations are pure and allocate at most one point; values are freely
//! shareable across threads.

mod config;
mod frame;
mod point;

pub use config::HeisConfig;
pub use frame::{check_frame_commutators, frame_coefficients, CommutatorReport, FrameCoefficients};
pub use point::HeisPoint;

use thiserror::Error;

/// Errors produced by construction and validation of group data.
#[derive(Debug, Error)]
pub enum HeisError {
    /// Horizontal dimension of a point does not match the configuration.
    #[error("dimension mismatch: config has d = {expected}, point has d = {found}")]
    DimensionMismatch { expected: usize, found: usize },
    /// The horizontal dimension must be at least 2 for the bracket to generate.
    #[error("horizontal dimension must be >= 2, got {0}")]
    DimensionTooSmall(usize),
    /// The form matrix is not square of size d.
    #[error("form matrix must be {expected}x{expected}, got row {row} of length {len}")]
    MalformedForm { expected: usize, row: usize, len: usize },
    /// The form matrix fails L + Lᵀ = 0.
    #[error("form is not antisymmetric: L[{row}][{col}] + L[{col}][{row}] = {defect}")]
    NotAntisymmetric { row: usize, col: usize, defect: f64 },
    /// The form matrix is identically zero, so the bracket cannot generate.
    #[error("form matrix is zero; the horizontal distribution is not bracket-generating")]
    ZeroForm,
    /// A coordinate is NaN or infinite.
    #[error("non-finite coordinate encountered")]
    NonFinite,
    /// Dilation scale must be strictly positive.
    #[error("dilation scale must be > 0, got {0}")]
    BadScale(f64),
}

/// Group product x · y = (t + t' + ½ L(z, z'), z + z').
pub fn group_mul(x: &HeisPoint, y: &HeisPoint, cfg: &HeisConfig) -> Result<HeisPoint, HeisError> {
    cfg.check_dim(x)?;
    cfg.check_dim(y)?;
    let t = x.t + y.t + 0.5 * cfg.apply_form(&x.z, &y.z);
    let z = x.z.iter().zip(&y.z).map(|(a, b)| a + b).collect();
    Ok(HeisPoint { t, z })
}

/// Group inverse x⁻¹ = (−t, −z).
///
/// Antisymmetry of L gives ½ L(z, −z) = 0, so x · x⁻¹ is the identity.
pub fn group_inv(x: &HeisPoint) -> HeisPoint {
    HeisPoint {
        t: -x.t,
        z: x.z.iter().map(|a| -a).collect(),
    }
}

/// Anisotropic dilation λ.(t, z) = (λ²t, λz), λ > 0.
pub fn dilate(lambda: f64, x: &HeisPoint) -> Result<HeisPoint, HeisError> {
    if !(lambda > 0.0) || !lambda.is_finite() {
        return Err(HeisError::BadScale(lambda));
    }
    Ok(HeisPoint {
        t: lambda * lambda * x.t,
        z: x.z.iter().map(|a| lambda * a).collect(),
    })
}

/// Koranyi gauge |x|_H = (t² + |z|⁴)^{1/4}, homogeneous of degree 1 under
/// [`dilate`].
pub fn koranyi_gauge(x: &HeisPoint) -> f64 {
    let z2: f64 = x.z.iter().map(|a| a * a).sum();
    (x.t * x.t + z2 * z2).powf(0.25)
}

/// Which homogeneous quasi-metric to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum QuasiMetricKind {
    /// d_K(x, y) = |x⁻¹ · y|_H — left-invariant.
    Koranyi,
    /// d_an(x, y) = |y − x|_H with the componentwise difference — translation-
    /// invariant for the abelian structure only.
    Anisotropic,
}

/// Evaluate the chosen quasi-metric between two points.
pub fn quasi_metric(
    kind: QuasiMetricKind,
    x: &HeisPoint,
    y: &HeisPoint,
    cfg: &HeisConfig,
) -> Result<f64, HeisError> {
    cfg.check_dim(x)?;
    cfg.check_dim(y)?;
    match kind {
        QuasiMetricKind::Koranyi => {
            let w = group_mul(&group_inv(x), y, cfg)?;
            Ok(koranyi_gauge(&w))
        }
        QuasiMetricKind::Anisotropic => {
            let diff = HeisPoint {
                t: y.t - x.t,
                z: y.z.iter().zip(&x.z).map(|(a, b)| a - b).collect(),
            };
            Ok(koranyi_gauge(&diff))
        }
    }
}

#[cfg(test)]
mod tests;
