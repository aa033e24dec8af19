//! Carnot–Carathéodory distances on the model Heisenberg group.
//!
//! A horizontal path is represented by a piecewise-constant control sequence
//! u^{(1)}, …, u^{(m)} ∈ ℝ^d on equal subintervals of [0, 1].  For such
//! controls the horizontality ODE (ż = u, ṫ = ½ zᵀ L u) integrates in closed
//! form: per step z advances by h·u^{(i)} and t by (h/2)·z_iᵀ L u^{(i)} with
//! h = 1/m, since uᵀLu = 0.  The endpoint map is therefore exact, which turns
//! the distance
//!
//! ```text
//! d_CC(x, y) = inf { (∫₀¹ |γ̇|² ds)^{1/2} : γ horizontal, γ(0)=x, γ(1)=y }
//! ```
//!
//! into a finite-dimensional equality-constrained least-squares problem.  The
//! solver eliminates the (linear) horizontal endpoint constraint by an affine
//! parametrization of the controls and treats the remaining scalar vertical
//! constraint by an augmented Lagrangian with quasi-Newton inner iterations,
//! multi-start, and mesh refinement.  Minimizing energy and reporting its
//! square root equals the length infimum by Cauchy–Schwarz (equality at
//! constant speed), so the reported value is the distance estimate itself.

mod lbfgs;
mod solver;

pub use solver::{cc_distance, CcDistanceResult, RefinementStep, SolverOptions};

use heis_core::{koranyi_gauge, HeisConfig, HeisError, HeisPoint};
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Errors produced by path evaluation and the distance solver.
#[derive(Debug, Error)]
pub enum CcError {
    #[error(transparent)]
    Heis(#[from] HeisError),
    #[error("controls have length {len}, expected {m} steps x {d} entries")]
    MalformedControls { len: usize, m: usize, d: usize },
    #[error("non-finite control entry")]
    NonFinite,
    #[error("invalid solver options: {0}")]
    BadOptions(String),
    /// The solver exhausted its refinements without meeting the constraint
    /// tolerance; the best certificate found so far is attached.
    #[error("distance solve did not converge (best residual {residual:.3e})")]
    NonConvergence {
        residual: f64,
        best: Option<Box<CcDistanceResult>>,
    },
}

/// A horizontal path: start point plus m piecewise-constant controls in ℝ^d.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HorizontalPath {
    start: HeisPoint,
    m: usize,
    d: usize,
    /// Row-major m×d control values.
    controls: Vec<f64>,
}

impl HorizontalPath {
    pub fn new(start: HeisPoint, m: usize, d: usize, controls: Vec<f64>) -> Result<Self, CcError> {
        if controls.len() != m * d || start.z.len() != d {
            return Err(CcError::MalformedControls {
                len: controls.len(),
                m,
                d,
            });
        }
        if controls.iter().any(|v| !v.is_finite()) {
            return Err(CcError::NonFinite);
        }
        Ok(HorizontalPath {
            start,
            m,
            d,
            controls,
        })
    }

    /// The trivial path with no steps (used for coincident endpoints).
    pub fn empty(start: HeisPoint) -> Self {
        let d = start.z.len();
        HorizontalPath {
            start,
            m: 0,
            d,
            controls: Vec::new(),
        }
    }

    pub fn start(&self) -> &HeisPoint {
        &self.start
    }

    pub fn steps(&self) -> usize {
        self.m
    }

    pub fn dim(&self) -> usize {
        self.d
    }

    pub fn control(&self, i: usize) -> &[f64] {
        &self.controls[i * self.d..(i + 1) * self.d]
    }

    /// CSV dump of the certificate, one row per step: index, then controls,
    /// then the (t, z) state reached after the step.
    pub fn to_csv(&self, cfg: &HeisConfig) -> Result<String, CcError> {
        let mut out = String::from("step");
        for j in 0..self.d {
            out.push_str(&format!(",u{j}"));
        }
        out.push_str(",t");
        for j in 0..self.d {
            out.push_str(&format!(",z{j}"));
        }
        out.push('\n');
        let h = 1.0 / self.m as f64;
        let mut state = self.start.clone();
        for i in 0..self.m {
            let u = self.control(i);
            state.t += 0.5 * h * cfg.apply_form(&state.z, u);
            for (zj, uj) in state.z.iter_mut().zip(u) {
                *zj += h * uj;
            }
            out.push_str(&i.to_string());
            for v in u {
                out.push_str(&format!(",{v:.17e}"));
            }
            out.push_str(&format!(",{:.17e}", state.t));
            for v in &state.z {
                out.push_str(&format!(",{v:.17e}"));
            }
            out.push('\n');
        }
        Ok(out)
    }
}

/// Exact endpoint γ(1) of a horizontal path.
///
/// Each step advances z by h·u^{(i)} and t by (h/2)·z_iᵀ L u^{(i)} where z_i
/// is the horizontal state at the start of the step; both increments are exact
/// for piecewise-constant controls.
pub fn endpoint_map(path: &HorizontalPath, cfg: &HeisConfig) -> Result<HeisPoint, CcError> {
    if path.d != cfg.d() {
        return Err(CcError::Heis(HeisError::DimensionMismatch {
            expected: cfg.d(),
            found: path.d,
        }));
    }
    if path.m == 0 {
        return Ok(path.start.clone());
    }
    let h = 1.0 / path.m as f64;
    let mut t = path.start.t;
    let mut z = path.start.z.clone();
    for i in 0..path.m {
        let u = path.control(i);
        // z_iᵀ L u via the bilinear form; computed before z is advanced.
        t += 0.5 * h * cfg.apply_form(&z, u);
        for (zj, uj) in z.iter_mut().zip(u) {
            *zj += h * uj;
        }
    }
    Ok(HeisPoint { t, z })
}

/// Path energy h·Σ_i |u^{(i)}|², the discrete ∫₀¹ |γ̇|² ds.
pub fn path_energy(path: &HorizontalPath) -> f64 {
    if path.m == 0 {
        return 0.0;
    }
    let h = 1.0 / path.m as f64;
    h * path.controls.iter().map(|v| v * v).sum::<f64>()
}

/// One scan sample of the CC-to-gauge comparison.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ScanSample {
    pub y: HeisPoint,
    pub cc: f64,
    pub gauge: f64,
    pub ratio: f64,
}

/// Extremes of cc_distance(e, y)/|y|_H over sampled y.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RatioReport {
    pub min: f64,
    pub max: f64,
    pub samples: Vec<ScanSample>,
    /// Samples dropped because the solver failed to converge.
    pub failures: usize,
}

/// Sample `n_samples` points in the Koranyi ball of the given radius and
/// report the range of cc_distance(e, y)/koranyi_gauge(y).
///
/// Nonconvergent samples are excluded from the extremes and counted.  Sampling
/// is seeded per sample index, so the report is independent of scheduling.
pub fn gauge_comparison_scan(
    cfg: &HeisConfig,
    n_samples: usize,
    radius: f64,
    opts: &SolverOptions,
) -> Result<RatioReport, CcError> {
    use rand::{Rng, SeedableRng};
    if n_samples == 0 {
        return Err(CcError::BadOptions("n_samples must be >= 1".into()));
    }
    if !(radius > 0.0) {
        return Err(CcError::BadOptions("radius must be positive".into()));
    }
    let e = HeisPoint::identity(cfg.d());
    let mut samples = Vec::with_capacity(n_samples);
    let mut failures = 0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for i in 0..n_samples {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(opts.seed);
        rng.set_stream(i as u64 + 1);
        // Rejection-sample a point of positive gauge inside the ball.
        let y = loop {
            let t = rng.gen_range(-radius * radius..radius * radius);
            let z: Vec<f64> = (0..cfg.d()).map(|_| rng.gen_range(-radius..radius)).collect();
            let cand = HeisPoint { t, z };
            let g = koranyi_gauge(&cand);
            if g > 1e-3 * radius && g <= radius {
                break cand;
            }
        };
        let mut sample_opts = opts.clone();
        sample_opts.seed = opts.seed.wrapping_add(0x9E37_79B9_7F4A_7C15u64.wrapping_mul(i as u64 + 1));
        match cc_distance(&e, &y, cfg, &sample_opts) {
            Ok(res) => {
                let gauge = koranyi_gauge(&y);
                let ratio = res.value / gauge;
                assert!(ratio.is_finite() && ratio > 0.0);
                lo = lo.min(ratio);
                hi = hi.max(ratio);
                samples.push(ScanSample {
                    y,
                    cc: res.value,
                    gauge,
                    ratio,
                });
            }
            Err(CcError::NonConvergence { .. }) => failures += 1,
            Err(other) => return Err(other),
        }
    }
    Ok(RatioReport {
        min: lo,
        max: hi,
        samples,
        failures,
    })
}

/// JSON record for one distance solve, as emitted by the CLI.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DistanceRecord {
    pub x: HeisPoint,
    pub y: HeisPoint,
    pub value: f64,
    pub energy: f64,
    pub residual: f64,
    pub m: usize,
    pub seed: u64,
}

impl DistanceRecord {
    pub fn from_result(x: &HeisPoint, y: &HeisPoint, res: &CcDistanceResult) -> Self {
        DistanceRecord {
            x: x.clone(),
            y: y.clone(),
            value: res.value,
            energy: res.energy,
            residual: res.constraint_residual,
            m: res.m,
            seed: res.seed,
        }
    }
}

// Re-export for consumers assembling certificates manually.
pub use heis_core;
