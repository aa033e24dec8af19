use serde::{Deserialize, Serialize};

use crate::blocks::{besov_norm, lp_blocks, BesovQ};
use crate::symbol::CircleSymbol;
use crate::SymbolError;

/// Sampled Hölder seminorm of a circle symbol.
///
/// The estimate is a maximum over a sampled pair set, hence a lower bound for
/// the true seminorm.  The classical exponent α is reported together with the
/// corresponding sub-Riemannian exponent 2α (the circle sits in the boundary
/// model where CC-Hölder classes coincide with classical ones at half the
/// exponent).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HolderReport {
    /// Classical Hölder exponent used in the quotient.
    pub alpha: f64,
    /// The matching CC exponent, always 2α.
    pub cc_alpha: f64,
    /// max |f(x)−f(y)| / dist(x,y)^α over the sampled pairs.
    pub seminorm_estimate: f64,
    /// Pair (θ, θ′) attaining the sampled maximum.
    pub witness: (f64, f64),
    /// Grid resolution used.
    pub grid: usize,
}

/// Sample the Hölder quotient on grid pairs at dyadic separations.
///
/// Evaluates f by FFT on `grid` points and scans all pairs (i, i+s) with
/// s ∈ {1, 2, 4, …, grid/2} — O(grid·log grid) pairs — in the arc-length
/// metric.
pub fn holder_seminorm(
    f: &CircleSymbol,
    alpha: f64,
    grid: usize,
) -> Result<HolderReport, SymbolError> {
    if grid < 8 {
        return Err(SymbolError::GridTooSmall { min: 8, got: grid });
    }
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(SymbolError::Invalid(format!(
            "Holder exponent must lie in (0, 1], got {alpha}"
        )));
    }
    let grid = grid.max(2 * f.cutoff() + 1).next_power_of_two();
    let values = f.eval_grid(grid)?;
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut best = 0.0f64;
    let mut witness = (0.0, 0.0);
    let mut sep = 1usize;
    while sep <= grid / 2 {
        let arc = two_pi * (sep.min(grid - sep) as f64) / grid as f64;
        let denom = arc.powf(alpha);
        for i in 0..grid {
            let j = (i + sep) % grid;
            let q = (values[i] - values[j]).norm() / denom;
            if q > best {
                best = q;
                witness = (two_pi * i as f64 / grid as f64, two_pi * j as f64 / grid as f64);
            }
        }
        sep *= 2;
    }
    Ok(HolderReport {
        alpha,
        cc_alpha: 2.0 * alpha,
        seminorm_estimate: best,
        witness,
        grid,
    })
}

/// Two-sided ratio band between Besov and Hölder norms over a corpus.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EquivReport {
    pub s: f64,
    /// Per-symbol ratios besov/(sup + seminorm); constants are skipped.
    pub ratios: Vec<f64>,
    pub min: f64,
    pub max: f64,
    /// Corpus members skipped as (numerically) constant.
    pub skipped: usize,
}

/// Compare besov_norm(f, s, ∞) against the sampled classical C^s norm
/// (sup norm plus Hölder seminorm at exponent s) over a corpus.
pub fn besov_holder_equiv_check(
    corpus: &[CircleSymbol],
    s: f64,
) -> Result<EquivReport, SymbolError> {
    if corpus.is_empty() {
        return Err(SymbolError::EmptyCorpus);
    }
    if !(s > 0.0 && s < 1.0) {
        return Err(SymbolError::Invalid(format!(
            "equivalence exponent must lie in (0, 1), got {s}"
        )));
    }
    let mut ratios = Vec::new();
    let mut skipped = 0;
    let (mut lo, mut hi) = (f64::INFINITY, 0.0f64);
    for f in corpus {
        let grid = (4 * f.cutoff().max(1)).next_power_of_two().max(1024);
        let holder = holder_seminorm(f, s, grid)?;
        if holder.seminorm_estimate <= 1e-13 {
            // Constant symbol: 0/0, excluded by design.
            skipped += 1;
            continue;
        }
        let cnorm = f.sup_norm(grid)? + holder.seminorm_estimate;
        let ratio = besov_norm(f, s, BesovQ::Inf)? / cnorm;
        assert!(ratio.is_finite() && ratio > 0.0);
        lo = lo.min(ratio);
        hi = hi.max(ratio);
        ratios.push(ratio);
    }
    if ratios.is_empty() {
        return Err(SymbolError::Invalid(
            "corpus contains only constant symbols".into(),
        ));
    }
    Ok(EquivReport {
        s,
        ratios,
        min: lo,
        max: hi,
        skipped,
    })
}

/// K-functional upper-bound probe for the real interpolation couple
/// (bounded, Lipschitz).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct KFunctionalReport {
    pub theta: f64,
    /// (t, K̂(t, f)) per requested t.
    pub entries: Vec<(f64, f64)>,
    /// sup over the t-grid of t^{−θ}·K̂(t, f).
    pub sup_ratio: f64,
    /// Sampled classical C^θ norm for comparison.
    pub holder_norm: f64,
}

/// For each t computes the upper bound
/// K̂(t, f) = min_J ( Σ_{j>J} ‖Φ_j f‖_∞ + t · Σ_{j≤J} 2^j ‖Φ_j f‖_∞ ),
/// splitting f into a low-frequency Lipschitz part (block-Lipschitz estimate
/// ‖Φ_j f‖_Lip ≲ 2^j ‖Φ_j f‖_∞) and a bounded tail.  J = −1 keeps everything
/// in the bounded part, so K̂ saturates at the ‖f‖_∞ level for large t.
pub fn k_functional_probe(
    f: &CircleSymbol,
    theta: f64,
    t_grid: &[f64],
) -> Result<KFunctionalReport, SymbolError> {
    if !(theta > 0.0 && theta < 1.0) {
        return Err(SymbolError::Invalid(format!(
            "interpolation parameter must lie in (0, 1), got {theta}"
        )));
    }
    if t_grid.is_empty() || t_grid.iter().any(|&t| !(t > 0.0)) {
        return Err(SymbolError::Invalid(
            "t grid must be nonempty and positive".into(),
        ));
    }
    let grid = (4 * f.cutoff().max(1)).next_power_of_two().max(256);
    let decomposition = lp_blocks(f);
    let sups: Vec<f64> = decomposition
        .blocks()
        .iter()
        .map(|b| b.sup_norm(grid))
        .collect::<Result<_, _>>()?;
    let jn = sups.len();

    let mut entries = Vec::with_capacity(t_grid.len());
    let mut sup_ratio = 0.0f64;
    for &t in t_grid {
        // Suffix sums of ‖Φ_j f‖_∞ and prefix sums of 2^j‖Φ_j f‖_∞ over J.
        let mut khat = f64::INFINITY;
        let mut lip_part = 0.0;
        // J = −1: all mass in the bounded part.
        let mut tail: f64 = sups.iter().sum();
        khat = khat.min(tail);
        for j in 0..jn {
            tail -= sups[j];
            lip_part += 2f64.powi(j as i32) * sups[j];
            khat = khat.min(tail + t * lip_part);
        }
        entries.push((t, khat));
        sup_ratio = sup_ratio.max(t.powf(-theta) * khat);
    }
    let holder = holder_seminorm(f, theta, grid)?;
    let holder_norm = f.sup_norm(grid)? + holder.seminorm_estimate;
    Ok(KFunctionalReport {
        theta,
        entries,
        sup_ratio,
        holder_norm,
    })
}
