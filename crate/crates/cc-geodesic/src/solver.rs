//! Augmented-Lagrangian distance solver.
//!
//! After left-translating so the source is the identity, the target is
//! w = x⁻¹·y = (Δt, Δz).  Controls are parametrized as u_i = Δz + v_i − v̄
//! with free v ∈ ℝ^{m×d}; the horizontal endpoint constraint (mean of the
//! controls equals Δz) then holds identically and only the scalar vertical
//! constraint t_end(u) = Δt remains.  That constraint is an exact quadratic
//! in the controls, so the augmented Lagrangian
//!
//! ```text
//! F(v; λ, ρ) = energy(u) + λ·c(u) + ½ρ·c(u)²,    c(u) = t_end(u) − Δt
//! ```
//!
//! is smooth with a cheap analytic gradient.  Inner minimization uses L-BFGS;
//! the outer loop performs multiplier updates with a geometric penalty
//! schedule.  The whole solve is repeated from several seeded starts (the
//! vertical stationary point at u ≡ Δz makes a zero start useless whenever
//! Δt ≠ 0) and over a doubling mesh until the value stabilizes.

use heis_core::{group_inv, group_mul, koranyi_gauge, HeisConfig, HeisPoint};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::lbfgs::{minimize, LbfgsParams};
use crate::{CcError, HorizontalPath};

/// Tunables for [`cc_distance`].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SolverOptions {
    /// Number of random starts per mesh level (a deterministic zero start is
    /// always added).
    pub starts: usize,
    /// Mesh refinement stops when the value changes by less than this
    /// relative amount under m ↦ 2m.
    pub rel_tol: f64,
    /// Required |t_end − Δt| of an acceptable certificate.
    pub constraint_tol: f64,
    /// Initial quadratic penalty weight.
    pub penalty_init: f64,
    /// Multiplicative penalty growth per outer round.
    pub penalty_growth: f64,
    /// Maximum multiplier updates per start.
    pub max_outer: usize,
    /// Maximum L-BFGS iterations per inner solve.
    pub max_inner: usize,
    /// Initial number of mesh steps.
    pub m_init: usize,
    /// Mesh ceiling; exceeding it without stabilization is a failure.
    pub m_max: usize,
    /// Base RNG seed for the multi-start perturbations.
    pub seed: u64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions {
            starts: 8,
            rel_tol: 1e-3,
            constraint_tol: 1e-8,
            penalty_init: 10.0,
            penalty_growth: 10.0,
            max_outer: 25,
            max_inner: 800,
            m_init: 32,
            m_max: 1024,
            seed: 0,
        }
    }
}

/// One mesh level of the solve.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RefinementStep {
    pub m: usize,
    pub value: f64,
    pub residual: f64,
    /// Number of starts that produced a feasible certificate at this level.
    pub feasible_starts: usize,
}

/// A converged distance estimate with its certificate path.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CcDistanceResult {
    /// The distance estimate, sqrt of the minimized energy.
    pub value: f64,
    pub energy: f64,
    /// |t_end − Δt| of the certificate.
    pub constraint_residual: f64,
    pub path: HorizontalPath,
    pub trace: Vec<RefinementStep>,
    /// Mesh size of the certificate.
    pub m: usize,
    pub seed: u64,
}

struct Problem<'a> {
    cfg: &'a HeisConfig,
    d: usize,
    m: usize,
    dz: Vec<f64>,
    dt: f64,
}

impl Problem<'_> {
    /// Controls from the affine parametrization u_i = Δz + v_i − v̄.
    fn controls(&self, v: &[f64]) -> Vec<f64> {
        let (m, d) = (self.m, self.d);
        let mut mean = vec![0.0; d];
        for i in 0..m {
            for j in 0..d {
                mean[j] += v[i * d + j];
            }
        }
        for mj in mean.iter_mut() {
            *mj /= m as f64;
        }
        let mut u = vec![0.0; m * d];
        for i in 0..m {
            for j in 0..d {
                u[i * d + j] = self.dz[j] + v[i * d + j] - mean[j];
            }
        }
        u
    }

    /// Vertical endpoint t_end(u) = (h²/2) Σ_i pref_iᵀ L u_i, pref_i = Σ_{j<i} u_j.
    fn t_end(&self, u: &[f64]) -> f64 {
        let (m, d) = (self.m, self.d);
        let h = 1.0 / m as f64;
        let mut pref = vec![0.0; d];
        let mut acc = 0.0;
        for i in 0..m {
            let ui = &u[i * d..(i + 1) * d];
            acc += self.cfg.apply_form(&pref, ui);
            for j in 0..d {
                pref[j] += ui[j];
            }
        }
        0.5 * h * h * acc
    }

    /// Augmented-Lagrangian value and gradient with respect to v.
    fn objective(&self, v: &[f64], lambda: f64, rho: f64, grad: &mut [f64]) -> f64 {
        let (m, d) = (self.m, self.d);
        let h = 1.0 / m as f64;
        let u = self.controls(v);

        let energy = h * u.iter().map(|x| x * x).sum::<f64>();
        let c = self.t_end(&u) - self.dt;
        let w = lambda + rho * c;

        // ∇_{u_k} t_end = (h²/2) · L(suff_k − pref_k)  with suff_k = total − pref_k − u_k.
        let mut total = vec![0.0; d];
        for i in 0..m {
            for j in 0..d {
                total[j] += u[i * d + j];
            }
        }
        let mut pref = vec![0.0; d];
        let mut arg = vec![0.0; d];
        let mut mean_g = vec![0.0; d];
        for i in 0..m {
            let ui = &u[i * d..(i + 1) * d];
            for j in 0..d {
                arg[j] = total[j] - 2.0 * pref[j] - ui[j];
            }
            let lv = self.cfg.form_apply_vec(&arg);
            for j in 0..d {
                let g = 2.0 * h * ui[j] + w * 0.5 * h * h * lv[j];
                grad[i * d + j] = g;
                mean_g[j] += g;
            }
            for j in 0..d {
                pref[j] += ui[j];
            }
        }
        // Project the gradient onto the mean-free parametrization of v.
        for mj in mean_g.iter_mut() {
            *mj /= m as f64;
        }
        for i in 0..m {
            for j in 0..d {
                grad[i * d + j] -= mean_g[j];
            }
        }
        energy + lambda * c + 0.5 * rho * c * c
    }
}

struct LevelBest {
    energy: f64,
    residual: f64,
    controls: Vec<f64>,
    feasible_starts: usize,
}

fn solve_level(
    problem: &Problem,
    opts: &SolverOptions,
    scale: f64,
    warm: Option<&[f64]>,
) -> Option<LevelBest> {
    let (m, d) = (problem.m, problem.d);
    let n = m * d;
    let inner = LbfgsParams {
        max_iter: opts.max_inner,
        gtol: 1e-12 * (1.0 + scale * scale),
        ftol: 1e-16,
        ..Default::default()
    };
    let mut best: Option<LevelBest> = None;
    let mut feasible_starts = 0;

    let total_starts = opts.starts + 1 + usize::from(warm.is_some());
    for s in 0..total_starts {
        let mut v = vec![0.0; n];
        if s == 0 {
            // Deterministic zero start: exact for purely horizontal targets.
        } else if s == 1 && warm.is_some() {
            let u_prev = warm.unwrap();
            // Each coarse control covers two fine steps.
            for i in 0..m {
                for j in 0..d {
                    v[i * d + j] = u_prev[(i / 2) * d + j] - problem.dz[j];
                }
            }
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(opts.seed);
            rng.set_stream(((m as u64) << 32) | s as u64);
            for vi in v.iter_mut() {
                // Box-Muller-free: sum of uniforms is plenty for a start point.
                *vi = 2.0 * scale * (rng.gen_range(-1.0..1.0) + rng.gen_range(-1.0..1.0));
            }
        }

        let mut lambda = 0.0;
        let mut rho = opts.penalty_init;
        for _ in 0..opts.max_outer {
            let res = minimize(
                |x, g| problem.objective(x, lambda, rho, g),
                v.clone(),
                &inner,
            );
            v = res.x;
            let u = problem.controls(&v);
            let c = problem.t_end(&u) - problem.dt;
            if c.abs() < 0.1 * opts.constraint_tol {
                break;
            }
            lambda += rho * c;
            rho = (rho * opts.penalty_growth).min(1e12);
        }

        let u = problem.controls(&v);
        let c = problem.t_end(&u) - problem.dt;
        let residual = c.abs();
        if residual <= opts.constraint_tol {
            feasible_starts += 1;
            let h = 1.0 / m as f64;
            let energy = h * u.iter().map(|x| x * x).sum::<f64>();
            if best.as_ref().map_or(true, |b| energy < b.energy) {
                best = Some(LevelBest {
                    energy,
                    residual,
                    controls: u,
                    feasible_starts: 0,
                });
            }
        }
    }
    best.map(|mut b| {
        b.feasible_starts = feasible_starts;
        b
    })
}

/// Compute d_CC(x, y) with a certificate path.
///
/// Returns 0 immediately for coincident inputs.  Otherwise solves on meshes
/// m, 2m, 4m, … until the value changes by less than `opts.rel_tol`
/// relatively; failing that before `opts.m_max` yields
/// [`CcError::NonConvergence`] carrying the best certificate found.
pub fn cc_distance(
    x: &HeisPoint,
    y: &HeisPoint,
    cfg: &HeisConfig,
    opts: &SolverOptions,
) -> Result<CcDistanceResult, CcError> {
    if opts.starts == 0 && opts.m_init < 1 {
        return Err(CcError::BadOptions("need m_init >= 1".into()));
    }
    if opts.m_init < 1 || opts.m_max < opts.m_init {
        return Err(CcError::BadOptions(
            "mesh bounds require 1 <= m_init <= m_max".into(),
        ));
    }
    let w = group_mul(&group_inv(x), y, cfg)?;
    if koranyi_gauge(&w) == 0.0 {
        return Ok(CcDistanceResult {
            value: 0.0,
            energy: 0.0,
            constraint_residual: 0.0,
            path: HorizontalPath::empty(x.clone()),
            trace: Vec::new(),
            m: 0,
            seed: opts.seed,
        });
    }

    let d = cfg.d();
    let dz_norm = w.z_norm();
    let scale = dz_norm.max(w.t.abs().sqrt()).max(0.1);

    let mut trace = Vec::new();
    let mut prev: Option<(f64, LevelBest, usize)> = None;
    let mut m = opts.m_init;
    loop {
        let problem = Problem {
            cfg,
            d,
            m,
            dz: w.z.clone(),
            dt: w.t,
        };
        let warm = prev.as_ref().map(|(_, b, _)| b.controls.as_slice());
        let level = solve_level(&problem, opts, scale, warm);
        if let Some(best) = level {
            let value = best.energy.sqrt();
            trace.push(RefinementStep {
                m,
                value,
                residual: best.residual,
                feasible_starts: best.feasible_starts,
            });
            let stabilized = prev
                .as_ref()
                .map(|(pv, _, _)| (pv - value).abs() <= opts.rel_tol * value.max(1e-300))
                .unwrap_or(false);
            let accepted = (value, best, m);
            if stabilized {
                let (value, best, m) = accepted;
                let path = HorizontalPath::new(x.clone(), m, d, best.controls)?;
                return Ok(CcDistanceResult {
                    value,
                    energy: best.energy,
                    constraint_residual: best.residual,
                    path,
                    trace,
                    m,
                    seed: opts.seed,
                });
            }
            prev = Some(accepted);
        } else {
            trace.push(RefinementStep {
                m,
                value: f64::NAN,
                residual: f64::INFINITY,
                feasible_starts: 0,
            });
        }
        if m >= opts.m_max {
            let best = prev.map(|(value, b, m)| {
                let path = HorizontalPath::new(x.clone(), m, d, b.controls)
                    .expect("certificate controls are well-formed");
                Box::new(CcDistanceResult {
                    value,
                    energy: b.energy,
                    constraint_residual: b.residual,
                    path,
                    trace: trace.clone(),
                    m,
                    seed: opts.seed,
                })
            });
            let residual = best
                .as_ref()
                .map(|b| b.constraint_residual)
                .unwrap_or(f64::INFINITY);
            return Err(CcError::NonConvergence { residual, best });
        }
        m *= 2;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::{endpoint_map, path_energy};

    #[test]
    fn endpoint_consistency_of_certificate() {
        let cfg = HeisConfig::standard_h1();
        let e = HeisPoint::identity(2);
        let y = HeisPoint::new(0.3, vec![0.7, -0.2]).unwrap();
        let opts = SolverOptions {
            m_init: 16,
            m_max: 128,
            ..Default::default()
        };
        let res = cc_distance(&e, &y, &cfg, &opts).unwrap();
        let end = endpoint_map(&res.path, &cfg).unwrap();
        assert!((end.t - y.t).abs() <= 1e-8);
        for (a, b) in end.z.iter().zip(&y.z) {
            assert!((a - b).abs() <= 1e-10);
        }
        assert!((path_energy(&res.path) - res.energy).abs() <= 1e-12 * res.energy);
        assert!((res.value - res.energy.sqrt()).abs() <= 1e-14);
    }
}
