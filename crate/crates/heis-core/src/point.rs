use serde::{Deserialize, Serialize};

use crate::HeisError;

/// A point x = (t, z) of the group, t vertical and z ∈ ℝ^d horizontal.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HeisPoint {
    pub t: f64,
    pub z: Vec<f64>,
}

impl HeisPoint {
    /// Build a point, rejecting NaN or infinite coordinates.
    pub fn new(t: f64, z: Vec<f64>) -> Result<Self, HeisError> {
        if !t.is_finite() || z.iter().any(|v| !v.is_finite()) {
            return Err(HeisError::NonFinite);
        }
        Ok(HeisPoint { t, z })
    }

    /// The group identity (0, 0) in dimension d.
    pub fn identity(d: usize) -> Self {
        HeisPoint {
            t: 0.0,
            z: vec![0.0; d],
        }
    }

    /// Euclidean norm of the horizontal part.
    pub fn z_norm(&self) -> f64 {
        self.z.iter().map(|a| a * a).sum::<f64>().sqrt()
    }
}
