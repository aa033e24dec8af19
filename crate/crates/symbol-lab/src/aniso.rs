//! Anisotropic Littlewood–Paley blocks on a periodic 3-d box.
//!
//! The box [0, 2π)³ with coordinates (t, z₁, z₂) stands in for the model
//! group ℝ^{2+1}.  Dual to the dilation λ.(t, z) = (λ²t, λz), frequencies are
//! graded by the gauge ρ(κ) = (κ_t² + |κ_z|⁴)^{1/4}, which is exactly
//! homogeneous: ρ(2^{−j}.κ) = 2^{−j} ρ(κ).  Blocks multiply the discrete
//! Fourier coefficients by χ-based windows in ρ, so the same telescoping
//! partition-of-unity and three-term identities hold as in the 1-d case.

use heis_core::{quasi_metric, HeisConfig, HeisPoint, QuasiMetricKind};
use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::window::chi;
use crate::SymbolError;

/// A complex function sampled on a periodic box, power-of-two points per axis.
///
/// Axis order is (t, z₁, z₂); index layout is row-major with z₂ contiguous.
#[derive(Debug, Clone)]
pub struct GridFunction3 {
    dims: [usize; 3],
    values: Vec<Complex64>,
}

impl GridFunction3 {
    pub fn new(dims: [usize; 3], values: Vec<Complex64>) -> Result<Self, SymbolError> {
        for &n in &dims {
            if !n.is_power_of_two() {
                return Err(SymbolError::GridNotPowerOfTwo(n));
            }
        }
        if values.len() != dims[0] * dims[1] * dims[2] {
            return Err(SymbolError::Invalid(format!(
                "expected {} samples, got {}",
                dims[0] * dims[1] * dims[2],
                values.len()
            )));
        }
        Ok(GridFunction3 { dims, values })
    }

    /// Sample a function of box coordinates (t, z₁, z₂) ∈ [0, 2π)³.
    pub fn from_fn(
        dims: [usize; 3],
        mut f: impl FnMut(f64, f64, f64) -> Complex64,
    ) -> Result<Self, SymbolError> {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut values = Vec::with_capacity(dims[0] * dims[1] * dims[2]);
        for it in 0..dims[0] {
            let t = two_pi * it as f64 / dims[0] as f64;
            for i1 in 0..dims[1] {
                let z1 = two_pi * i1 as f64 / dims[1] as f64;
                for i2 in 0..dims[2] {
                    let z2 = two_pi * i2 as f64 / dims[2] as f64;
                    values.push(f(t, z1, z2));
                }
            }
        }
        GridFunction3::new(dims, values)
    }

    /// The pure Fourier mode e^{i(κ_t t + κ₁ z₁ + κ₂ z₂)}.
    pub fn single_mode(dims: [usize; 3], kappa: [i64; 3]) -> Result<Self, SymbolError> {
        GridFunction3::from_fn(dims, |t, z1, z2| {
            Complex64::from_polar(
                1.0,
                kappa[0] as f64 * t + kappa[1] as f64 * z1 + kappa[2] as f64 * z2,
            )
        })
    }

    pub fn dims(&self) -> [usize; 3] {
        self.dims
    }

    pub fn values(&self) -> &[Complex64] {
        &self.values
    }

    fn idx(&self, it: usize, i1: usize, i2: usize) -> usize {
        (it * self.dims[1] + i1) * self.dims[2] + i2
    }
}

/// In-place 1-d FFTs along every axis; `inverse = false` then divides by the
/// number of points so the result holds honest Fourier coefficients.
fn fft3(values: &mut [Complex64], dims: [usize; 3], inverse: bool) {
    let mut planner = FftPlanner::new();
    let [n0, n1, n2] = dims;
    // Axis 2: contiguous rows.
    let fft2 = if inverse {
        planner.plan_fft_inverse(n2)
    } else {
        planner.plan_fft_forward(n2)
    };
    for chunk in values.chunks_exact_mut(n2) {
        fft2.process(chunk);
    }
    // Axis 1: stride n2 within each t-slab.
    let fft1 = if inverse {
        planner.plan_fft_inverse(n1)
    } else {
        planner.plan_fft_forward(n1)
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); n1];
    for it in 0..n0 {
        for i2 in 0..n2 {
            for i1 in 0..n1 {
                scratch[i1] = values[(it * n1 + i1) * n2 + i2];
            }
            fft1.process(&mut scratch);
            for i1 in 0..n1 {
                values[(it * n1 + i1) * n2 + i2] = scratch[i1];
            }
        }
    }
    // Axis 0: stride n1·n2.
    let fft0 = if inverse {
        planner.plan_fft_inverse(n0)
    } else {
        planner.plan_fft_forward(n0)
    };
    let mut scratch = vec![Complex64::new(0.0, 0.0); n0];
    for i1 in 0..n1 {
        for i2 in 0..n2 {
            for it in 0..n0 {
                scratch[it] = values[(it * n1 + i1) * n2 + i2];
            }
            fft0.process(&mut scratch);
            for it in 0..n0 {
                values[(it * n1 + i1) * n2 + i2] = scratch[it];
            }
        }
    }
    if !inverse {
        let scale = 1.0 / (n0 * n1 * n2) as f64;
        for v in values.iter_mut() {
            *v *= scale;
        }
    }
}

fn signed_freq(i: usize, n: usize) -> i64 {
    if i < n / 2 {
        i as i64
    } else {
        i as i64 - n as i64
    }
}

/// Frequency gauge ρ(κ) = (κ_t² + |κ_z|⁴)^{1/4}.
fn freq_gauge(kt: i64, k1: i64, k2: i64) -> f64 {
    let t2 = (kt * kt) as f64;
    let z2 = (k1 * k1 + k2 * k2) as f64;
    (t2 + z2 * z2).powf(0.25)
}

fn rho_window(j: usize, rho: f64) -> f64 {
    if j == 0 {
        chi(rho)
    } else {
        let scale = 2f64.powi(-(j as i32));
        chi(scale * rho) - chi(2.0 * scale * rho)
    }
}

/// Results of the anisotropic block check.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AnisoReport {
    pub dims: [usize; 3],
    pub num_blocks: usize,
    /// Relative coefficient-space error of Σ_j Φ_j f = f.
    pub reconstruction_residual: f64,
    /// Sup-norm residual of the three-term identity, maximized over j.
    pub identity_residual: f64,
    /// Per-block sampled sup norms ‖Φ_j f‖_∞.
    pub block_sups: Vec<f64>,
    /// sup_j 2^{js} ‖Φ_j f‖_∞.
    pub besov_value: f64,
    /// Sampled anisotropic Hölder seminorm at exponent s (lower bound).
    pub holder_estimate: f64,
    pub s: f64,
}

/// Build anisotropic dyadic blocks of `f` by 3-d FFT, verify the three-term
/// identity and reconstruction, and compare the block-sup Besov value with
/// the Hölder seminorm measured in the anisotropic quasi-metric.
pub fn aniso_blocks_check(
    cfg: &HeisConfig,
    f: &GridFunction3,
    s: f64,
) -> Result<AnisoReport, SymbolError> {
    if cfg.d() != 2 {
        return Err(SymbolError::WrongDimension(cfg.d()));
    }
    if !(s > 0.0 && s <= 2.0) {
        return Err(SymbolError::Invalid(format!(
            "anisotropic exponent must lie in (0, 2], got {s}"
        )));
    }
    let dims = f.dims;
    let [n0, n1, n2] = dims;

    // Forward transform to coefficients.
    let mut spectrum = f.values.clone();
    fft3(&mut spectrum, dims, false);

    // Precompute the gauge per frequency and the number of blocks needed.
    let mut rho = vec![0.0f64; spectrum.len()];
    let mut rho_max = 0.0f64;
    for it in 0..n0 {
        let kt = signed_freq(it, n0);
        for i1 in 0..n1 {
            let k1 = signed_freq(i1, n1);
            for i2 in 0..n2 {
                let k2 = signed_freq(i2, n2);
                let r = freq_gauge(kt, k1, k2);
                rho[(it * n1 + i1) * n2 + i2] = r;
                rho_max = rho_max.max(r);
            }
        }
    }
    let mut jmax = 1usize;
    while 2f64.powi(jmax as i32 - 1) < rho_max.max(1.0) {
        jmax += 1;
    }
    let num_blocks = jmax + 1;

    let coeff_scale: f64 = spectrum.iter().fold(0.0f64, |m, c| m.max(c.norm()));
    let mut reconstruction = vec![Complex64::new(0.0, 0.0); spectrum.len()];
    let mut block_sups = Vec::with_capacity(num_blocks);
    let mut identity_residual = 0.0f64;

    for j in 0..num_blocks {
        let mut block_coeffs: Vec<Complex64> = spectrum
            .iter()
            .zip(&rho)
            .map(|(c, &r)| c * rho_window(j, r))
            .collect();
        for (acc, c) in reconstruction.iter_mut().zip(&block_coeffs) {
            *acc += c;
        }

        // Three-term identity residual in sup norm: transform the defect
        // (1 − Σ_{|j'−j|≤1} φ_{j'}) φ_j f̂ back to values.
        let mut defect: Vec<Complex64> = spectrum
            .iter()
            .zip(&rho)
            .map(|(c, &r)| {
                let wj = rho_window(j, r);
                let mut neighbor = wj + rho_window(j + 1, r);
                if j > 0 {
                    neighbor += rho_window(j - 1, r);
                }
                c * (wj - neighbor * wj)
            })
            .collect();
        if defect.iter().any(|c| c.norm_sqr() != 0.0) {
            fft3(&mut defect, dims, true);
            let sup = defect.iter().fold(0.0f64, |m, c| m.max(c.norm()));
            identity_residual = identity_residual.max(sup);
        }

        fft3(&mut block_coeffs, dims, true);
        block_sups.push(block_coeffs.iter().fold(0.0f64, |m, c| m.max(c.norm())));
    }

    let mut recon_err = 0.0f64;
    for (a, b) in reconstruction.iter().zip(&spectrum) {
        recon_err = recon_err.max((a - b).norm());
    }
    let reconstruction_residual = if coeff_scale > 0.0 {
        recon_err / coeff_scale
    } else {
        recon_err
    };

    let besov_value = block_sups
        .iter()
        .enumerate()
        .fold(0.0f64, |m, (j, &b)| m.max(2f64.powi(j as i32).powf(s) * b));

    // Sampled anisotropic Hölder seminorm: axis-aligned pairs at dyadic
    // separations, distances by the anisotropic quasi-metric on the box
    // (minimum-image convention per axis).
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut holder = 0.0f64;
    for axis in 0..3 {
        let n_axis = dims[axis];
        let mut sep = 1usize;
        while sep <= n_axis / 2 {
            let delta = two_pi * (sep.min(n_axis - sep) as f64) / n_axis as f64;
            let (dt, dz1, dz2) = match axis {
                0 => (delta, 0.0, 0.0),
                1 => (0.0, delta, 0.0),
                _ => (0.0, 0.0, delta),
            };
            let origin = HeisPoint::identity(2);
            let offset = HeisPoint::new(dt, vec![dz1, dz2]).unwrap();
            let dist = quasi_metric(QuasiMetricKind::Anisotropic, &origin, &offset, cfg)
                .map_err(|e| SymbolError::Invalid(e.to_string()))?;
            let denom = dist.powf(s);
            for it in 0..n0 {
                for i1 in 0..n1 {
                    for i2 in 0..n2 {
                        let a = f.values[f.idx(it, i1, i2)];
                        let b = match axis {
                            0 => f.values[f.idx((it + sep) % n0, i1, i2)],
                            1 => f.values[f.idx(it, (i1 + sep) % n1, i2)],
                            _ => f.values[f.idx(it, i1, (i2 + sep) % n2)],
                        };
                        let q = (a - b).norm() / denom;
                        if q > holder {
                            holder = q;
                        }
                    }
                }
            }
            sep *= 2;
        }
    }

    Ok(AnisoReport {
        dims,
        num_blocks,
        reconstruction_residual,
        identity_residual,
        block_sups,
        besov_value,
        holder_estimate: holder,
        s,
    })
}
