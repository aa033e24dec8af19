use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::symbol::CircleSymbol;
use crate::window::{num_blocks, window_weight};
use crate::SymbolError;

/// Littlewood–Paley decomposition of a circle symbol.
///
/// Block j carries the coefficients of f multiplied by the smooth window
/// φ_j; the windows form an exact partition of unity on every retained
/// frequency, so the blocks sum back to f.
#[derive(Debug, Clone)]
pub struct BlockDecomposition {
    blocks: Vec<CircleSymbol>,
}

impl BlockDecomposition {
    pub fn blocks(&self) -> &[CircleSymbol] {
        &self.blocks
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    /// Coefficient-wise sum of all blocks.
    pub fn reconstruct(&self) -> CircleSymbol {
        let n = self.blocks.iter().map(|b| b.cutoff()).max().unwrap_or(0);
        let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
        for b in &self.blocks {
            for k in -(b.cutoff() as i64)..=(b.cutoff() as i64) {
                coeffs[(k + n as i64) as usize] += b.coeff(k);
            }
        }
        CircleSymbol::from_coeffs(n, coeffs).expect("length consistent by construction")
    }

    /// Sup-norm residual (on coefficients) of the three-term reproduction
    /// Φ_j = (Φ_{j−1} + Φ_j + Φ_{j+1}) Φ_j, maximized over j.
    ///
    /// Adjacent windows sum to 1 on the support of φ_j, so the residual is
    /// pure floating-point noise.
    pub fn three_term_identity_residual(&self, f: &CircleSymbol) -> f64 {
        let mut worst = 0.0f64;
        for j in 0..self.blocks.len() {
            for k in -(f.cutoff() as i64)..=(f.cutoff() as i64) {
                let wj = window_weight(j, k);
                let mut neighbor = wj;
                if j > 0 {
                    neighbor += window_weight(j - 1, k);
                }
                neighbor += window_weight(j + 1, k);
                let lhs = wj * f.coeff(k);
                let rhs = neighbor * wj * f.coeff(k);
                worst = worst.max((lhs - rhs).norm());
            }
        }
        worst
    }
}

/// Decompose f into smooth dyadic frequency blocks.
pub fn lp_blocks(f: &CircleSymbol) -> BlockDecomposition {
    let n = f.cutoff();
    let count = num_blocks(n.max(1));
    let blocks = (0..count)
        .map(|j| {
            let coeffs = (-(n as i64)..=(n as i64))
                .map(|k| f.coeff(k) * window_weight(j, k))
                .collect();
            CircleSymbol::from_coeffs(n, coeffs).expect("length consistent")
        })
        .collect();
    BlockDecomposition { blocks }
}

/// Which ℓ^q aggregation the Besov norm uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BesovQ {
    One,
    Inf,
}

/// Besov norm: ℓ^q over j of 2^{js}·‖Φ_j f‖_∞.
///
/// Block sup norms are sampled by FFT on a grid at least 4× the top retained
/// frequency (and at least 256 points).
pub fn besov_norm(f: &CircleSymbol, s: f64, q: BesovQ) -> Result<f64, SymbolError> {
    if s < 0.0 {
        return Err(SymbolError::Invalid(format!(
            "Besov smoothness must be >= 0, got {s}"
        )));
    }
    let grid = (4 * f.cutoff().max(1)).next_power_of_two().max(256);
    let decomposition = lp_blocks(f);
    let mut acc: f64 = 0.0;
    for (j, block) in decomposition.blocks().iter().enumerate() {
        let term = 2f64.powi(j as i32).powf(s) * block.sup_norm(grid)?;
        match q {
            BesovQ::One => acc += term,
            BesovQ::Inf => acc = acc.max(term),
        }
    }
    Ok(acc)
}
