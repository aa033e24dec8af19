use std::collections::BTreeMap;
use std::sync::Arc;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::SymbolError;

/// Construction recipe for a [`CircleSymbol`]; serializable and sufficient to
/// rebuild the symbol bit-for-bit.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum SymbolSpec {
    /// Coefficients 2^{−nβ} at frequencies ±2ⁿ, 0 ≤ n ≤ n_max.
    Lacunary { beta: f64, n_max: u32 },
    /// Explicit trigonometric polynomial: frequency → [re, im].
    Trig {
        #[serde(with = "trig_coeffs")]
        coeffs: BTreeMap<i64, (f64, f64)>,
    },
    /// Random real symbol with coeff(k) = ξ_k·|k|^{−β−1/2}, ξ_k standard
    /// Gaussian, Hermitian-symmetrized, deterministic in the seed.
    Random { beta: f64, n_max: u32, seed: u64 },
}

/// Frequency keys serialized as strings so the map survives the buffering
/// serde applies to internally tagged enums (which loses integer map keys).
mod trig_coeffs {
    use std::collections::BTreeMap;

    use serde::de::Error as _;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(
        map: &BTreeMap<i64, (f64, f64)>,
        ser: S,
    ) -> Result<S::Ok, S::Error> {
        ser.collect_map(map.iter().map(|(k, v)| (k.to_string(), v)))
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(
        de: D,
    ) -> Result<BTreeMap<i64, (f64, f64)>, D::Error> {
        let raw = BTreeMap::<String, (f64, f64)>::deserialize(de)?;
        raw.into_iter()
            .map(|(k, v)| {
                k.parse::<i64>()
                    .map(|k| (k, v))
                    .map_err(|_| D::Error::custom(format!("bad frequency key '{k}'")))
            })
            .collect()
    }
}

impl SymbolSpec {
    /// The single harmonic e_k.
    pub fn harmonic(k: i64) -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(k, (1.0, 0.0));
        SymbolSpec::Trig { coeffs }
    }

    /// cos θ, i.e. coefficients ½ at ±1.
    pub fn cosine() -> Self {
        let mut coeffs = BTreeMap::new();
        coeffs.insert(1, (0.5, 0.0));
        coeffs.insert(-1, (0.5, 0.0));
        SymbolSpec::Trig { coeffs }
    }
}

/// A function on S¹ as a finite two-sided Fourier-coefficient sequence.
#[derive(Debug, Clone)]
pub struct CircleSymbol {
    /// Frequency cutoff N; coefficients live on −N..N.
    n: usize,
    /// coeffs[k + N] is the coefficient of e^{ikθ}.
    coeffs: Vec<Complex64>,
    /// Construction metadata (None for ad-hoc coefficient data).
    spec: Option<SymbolSpec>,
}

impl CircleSymbol {
    /// Wrap raw coefficients indexed −N..N.
    pub fn from_coeffs(n: usize, coeffs: Vec<Complex64>) -> Result<Self, SymbolError> {
        if coeffs.len() != 2 * n + 1 {
            return Err(SymbolError::Invalid(format!(
                "expected {} coefficients for cutoff {n}, got {}",
                2 * n + 1,
                coeffs.len()
            )));
        }
        Ok(CircleSymbol {
            n,
            coeffs,
            spec: None,
        })
    }

    /// Frequency cutoff N.
    pub fn cutoff(&self) -> usize {
        self.n
    }

    /// Largest |k| carrying a nonzero coefficient (0 for the zero symbol).
    pub fn top_frequency(&self) -> usize {
        (0..=self.n)
            .rev()
            .find(|&k| {
                self.coeff(k as i64).norm_sqr() != 0.0 || self.coeff(-(k as i64)).norm_sqr() != 0.0
            })
            .unwrap_or(0)
    }

    /// Coefficient at frequency k (zero outside the cutoff).
    pub fn coeff(&self, k: i64) -> Complex64 {
        let n = self.n as i64;
        if k < -n || k > n {
            Complex64::new(0.0, 0.0)
        } else {
            self.coeffs[(k + n) as usize]
        }
    }

    /// All coefficients, indexed −N..N.
    pub fn coeffs(&self) -> &[Complex64] {
        &self.coeffs
    }

    pub fn spec(&self) -> Option<&SymbolSpec> {
        self.spec.as_ref()
    }

    /// True when coeff(−k) = conj(coeff(k)) for all k, i.e. the symbol is
    /// real-valued.
    pub fn is_real_symbol(&self) -> bool {
        (0..=self.n as i64).all(|k| {
            let d = self.coeff(-k) - self.coeff(k).conj();
            d.norm() <= 1e-14 * (1.0 + self.coeff(k).norm())
        })
    }

    /// Complex conjugate symbol ā (coefficients conj reversed).
    pub fn conj(&self) -> CircleSymbol {
        let coeffs = self.coeffs.iter().rev().map(|c| c.conj()).collect();
        CircleSymbol {
            n: self.n,
            coeffs,
            spec: None,
        }
    }

    /// Evaluate on the uniform grid θ_j = 2πj/M by zero-padded inverse FFT.
    ///
    /// Requires M ≥ 2N+1 so no two retained frequencies alias.
    pub fn eval_grid(&self, grid: usize) -> Result<Vec<Complex64>, SymbolError> {
        if grid < 2 * self.n + 1 {
            return Err(SymbolError::GridTooSmall {
                min: 2 * self.n + 1,
                got: grid,
            });
        }
        let mut buf = vec![Complex64::new(0.0, 0.0); grid];
        let m = grid as i64;
        for k in -(self.n as i64)..=(self.n as i64) {
            let idx = k.rem_euclid(m) as usize;
            buf[idx] += self.coeff(k);
        }
        let fft = plan_inverse(grid);
        fft.process(&mut buf);
        Ok(buf)
    }

    /// Sup norm sampled on the given grid (a lower bound for ‖·‖_∞).
    pub fn sup_norm(&self, grid: usize) -> Result<f64, SymbolError> {
        Ok(self
            .eval_grid(grid)?
            .iter()
            .fold(0.0f64, |m, v| m.max(v.norm())))
    }
}

fn plan_inverse(len: usize) -> Arc<dyn rustfft::Fft<f64>> {
    FftPlanner::new().plan_fft_inverse(len)
}

/// The lacunary symbol with weights 2^{−nβ} at frequencies ±2ⁿ, n ≤ n_max.
///
/// β = 1/4 is the classical C^{1/4} lacunary series used throughout the
/// Dixmier-functional experiments.
pub fn make_lacunary(beta: f64, n_max: u32) -> Result<CircleSymbol, SymbolError> {
    if !(beta > 0.0 && beta <= 1.0) {
        return Err(SymbolError::BadBeta(beta));
    }
    let top = 1usize << n_max;
    let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * top + 1];
    for n in 0..=n_max {
        let f = 1i64 << n;
        let w = 2f64.powf(-(n as f64) * beta);
        coeffs[(f + top as i64) as usize] += Complex64::new(w, 0.0);
        coeffs[(-f + top as i64) as usize] += Complex64::new(w, 0.0);
    }
    Ok(CircleSymbol {
        n: top,
        coeffs,
        spec: Some(SymbolSpec::Lacunary { beta, n_max }),
    })
}

/// Build a symbol from its construction recipe.
pub fn make_symbol(spec: &SymbolSpec) -> Result<CircleSymbol, SymbolError> {
    match spec {
        SymbolSpec::Lacunary { beta, n_max } => make_lacunary(*beta, *n_max),
        SymbolSpec::Trig { coeffs } => {
            if coeffs.is_empty() {
                return Err(SymbolError::BadSpec("trig spec has no coefficients".into()));
            }
            let n = coeffs.keys().map(|k| k.unsigned_abs() as usize).max().unwrap();
            let mut data = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
            for (&k, &(re, im)) in coeffs {
                if !re.is_finite() || !im.is_finite() {
                    return Err(SymbolError::BadSpec(format!(
                        "non-finite coefficient at frequency {k}"
                    )));
                }
                data[(k + n as i64) as usize] = Complex64::new(re, im);
            }
            Ok(CircleSymbol {
                n,
                coeffs: data,
                spec: Some(spec.clone()),
            })
        }
        SymbolSpec::Random { beta, n_max, seed } => {
            if !(*beta > 0.0 && *beta <= 1.0) {
                return Err(SymbolError::BadBeta(*beta));
            }
            let n = *n_max as usize;
            if n == 0 {
                return Err(SymbolError::BadSpec("random spec needs n_max >= 1".into()));
            }
            let mut rng = ChaCha8Rng::seed_from_u64(*seed);
            let mut coeffs = vec![Complex64::new(0.0, 0.0); 2 * n + 1];
            for k in 1..=n {
                let xi_re: f64 = rng.sample(StandardNormal);
                let xi_im: f64 = rng.sample(StandardNormal);
                let amp = (k as f64).powf(-beta - 0.5) / std::f64::consts::SQRT_2;
                let c = Complex64::new(xi_re * amp, xi_im * amp);
                coeffs[n + k] = c;
                coeffs[n - k] = c.conj();
            }
            Ok(CircleSymbol {
                n,
                coeffs,
                spec: Some(spec.clone()),
            })
        }
    }
}
