use serde::{Deserialize, Serialize};

use crate::{HeisError, HeisPoint};

/// Group data: horizontal dimension `d` and the antisymmetric form `L`.
///
/// Serializes as `{"d": 2, "L": [[0.0, 1.0], [-1.0, 0.0]]}`; deserialization
/// rejects non-antisymmetric or zero forms and d < 2.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(try_from = "RawConfig", into = "RawConfig")]
pub struct HeisConfig {
    d: usize,
    /// Row-major d×d entries of L.
    form: Vec<f64>,
}

/// Wire format before validation.
#[derive(Debug, Clone, Serialize, Deserialize)]
struct RawConfig {
    d: usize,
    #[serde(rename = "L")]
    l: Vec<Vec<f64>>,
}

impl TryFrom<RawConfig> for HeisConfig {
    type Error = HeisError;

    fn try_from(raw: RawConfig) -> Result<Self, HeisError> {
        HeisConfig::new(raw.d, &raw.l)
    }
}

impl From<HeisConfig> for RawConfig {
    fn from(cfg: HeisConfig) -> RawConfig {
        let l = (0..cfg.d)
            .map(|j| cfg.form[j * cfg.d..(j + 1) * cfg.d].to_vec())
            .collect();
        RawConfig { d: cfg.d, l }
    }
}

impl HeisConfig {
    /// Validate and build a configuration from the rows of L.
    pub fn new(d: usize, l: &[Vec<f64>]) -> Result<Self, HeisError> {
        if d < 2 {
            return Err(HeisError::DimensionTooSmall(d));
        }
        if l.len() != d {
            return Err(HeisError::MalformedForm {
                expected: d,
                row: l.len(),
                len: 0,
            });
        }
        let mut form = Vec::with_capacity(d * d);
        for (j, row) in l.iter().enumerate() {
            if row.len() != d {
                return Err(HeisError::MalformedForm {
                    expected: d,
                    row: j,
                    len: row.len(),
                });
            }
            if row.iter().any(|v| !v.is_finite()) {
                return Err(HeisError::NonFinite);
            }
            form.extend_from_slice(row);
        }
        for j in 0..d {
            for k in j..d {
                let defect = form[j * d + k] + form[k * d + j];
                if defect != 0.0 {
                    return Err(HeisError::NotAntisymmetric {
                        row: j,
                        col: k,
                        defect,
                    });
                }
            }
        }
        if form.iter().all(|&v| v == 0.0) {
            return Err(HeisError::ZeroForm);
        }
        Ok(HeisConfig { d, form })
    }

    /// The first Heisenberg group H¹: d = 2 with L = [[0, 1], [−1, 0]].
    pub fn standard_h1() -> Self {
        HeisConfig::new(2, &[vec![0.0, 1.0], vec![-1.0, 0.0]]).expect("standard form is valid")
    }

    /// Horizontal dimension d.
    pub fn d(&self) -> usize {
        self.d
    }

    /// Entry L_{jk} (zero-based indices).
    pub fn form_entry(&self, j: usize, k: usize) -> f64 {
        self.form[j * self.d + k]
    }

    /// Bilinear form L(z, w) = zᵀ L w.
    pub fn apply_form(&self, z: &[f64], w: &[f64]) -> f64 {
        debug_assert_eq!(z.len(), self.d);
        debug_assert_eq!(w.len(), self.d);
        let mut acc = 0.0;
        for j in 0..self.d {
            let mut row = 0.0;
            for k in 0..self.d {
                row += self.form[j * self.d + k] * w[k];
            }
            acc += z[j] * row;
        }
        acc
    }

    /// Matrix-vector product (L w)_j = Σ_k L_{jk} w_k.
    pub fn form_apply_vec(&self, w: &[f64]) -> Vec<f64> {
        debug_assert_eq!(w.len(), self.d);
        (0..self.d)
            .map(|j| {
                (0..self.d)
                    .map(|k| self.form[j * self.d + k] * w[k])
                    .sum()
            })
            .collect()
    }

    pub(crate) fn check_dim(&self, x: &HeisPoint) -> Result<(), HeisError> {
        if x.z.len() != self.d {
            return Err(HeisError::DimensionMismatch {
                expected: self.d,
                found: x.z.len(),
            });
        }
        Ok(())
    }
}
