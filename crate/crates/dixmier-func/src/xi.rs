use std::collections::BTreeMap;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use symbol_lab::CircleSymbol;

use crate::gamma::gamma_lattice_sum;
use crate::DixmierError;

/// One log-Cesàro partial Λ_N.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct CesaroPoint {
    pub n: usize,
    pub value: f64,
}

/// The family {Λ_N} for a sequence, indexed by the requested N values.
///
/// Generalized limits are not modeled; consumers inspect the whole family
/// (plus its min/max over dyadic N) instead of a single number.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LogCesaroSeries {
    /// Human-readable descriptor of the source sequence.
    pub source: String,
    pub points: Vec<CesaroPoint>,
}

impl LogCesaroSeries {
    /// (min, max) of the partials.
    pub fn range(&self) -> Option<(f64, f64)> {
        self.points.iter().fold(None, |acc, p| {
            Some(match acc {
                None => (p.value, p.value),
                Some((lo, hi)) => (lo.min(p.value), hi.max(p.value)),
            })
        })
    }
}

/// Λ_N for each requested N, allowing signed inputs (the public entry point
/// [`crate::log_cesaro`] enforces nonnegativity first).
pub(crate) fn signed_partials(x: &[f64], n_list: &[usize], source: &str) -> LogCesaroSeries {
    let mut prefix = Vec::with_capacity(x.len());
    let mut acc = 0.0;
    for &v in x {
        acc += v;
        prefix.push(acc);
    }
    let points = n_list
        .iter()
        .map(|&n| CesaroPoint {
            n,
            value: prefix[n] / ((n as f64) + 2.0).ln(),
        })
        .collect();
    LogCesaroSeries {
        source: source.to_string(),
        points,
    }
}

/// Diagonal estimate of a commutator-product functional.
///
/// `diagonal[l]` is Re⟨T e_l, e_l⟩ for the operator T assembled from the
/// symbol tuple; the partials are the log-Cesàro means of that sequence.
/// By the min-max principle the diagonal sequence lower-bounds the eigenvalue
/// sequence for positive constructions, so the estimate is a lower bound in
/// general and exact where the operator is diagonal in the Fourier basis.
#[derive(Debug, Clone, Serialize)]
pub struct XiEstimate {
    /// Functional order k (the tuple has 2k symbols).
    pub k: usize,
    /// Diagonal entries computed for 0 ≤ l ≤ truncation.
    pub truncation: usize,
    pub symbols: Vec<String>,
    pub diagonal: Vec<f64>,
    /// Largest imaginary part encountered on the diagonal (should be ~0 for
    /// self-adjoint constructions).
    pub max_imag: f64,
    pub partials: LogCesaroSeries,
    /// For ζ estimates: max deviation between the direct product of pair
    /// commutators and its alternating-sum expansion into ξ-type products.
    pub validation_residual: Option<f64>,
}

/// Sparse Fourier-coefficient vector over ℤ.
type SparseVec = BTreeMap<i64, Complex64>;

/// Nonzero (frequency, coefficient) pairs of a symbol, with the constant
/// coefficient dropped: [P, a] does not see it, and dropping it makes the
/// estimators invariant under a_i ↦ a_i + c bit for bit.
fn symbol_support(a: &CircleSymbol) -> Vec<(i64, Complex64)> {
    let n = a.cutoff() as i64;
    (-n..=n)
        .filter(|&q| q != 0)
        .filter_map(|q| {
            let c = a.coeff(q);
            (c.norm_sqr() != 0.0).then_some((q, c))
        })
        .collect()
}

fn convolve(v: &SparseVec, support: &[(i64, Complex64)]) -> SparseVec {
    let mut out = SparseVec::new();
    for (&j, &c) in v {
        for &(q, w) in support {
            *out.entry(j + q).or_insert(Complex64::new(0.0, 0.0)) += c * w;
        }
    }
    out
}

fn project(mut v: SparseVec) -> SparseVec {
    v.retain(|&j, _| j >= 0);
    v
}

/// [P, a]·v = P(a·v) − a·(P·v), exact on ℤ (no window, hence no aliasing).
fn commutator_apply(v: &SparseVec, support: &[(i64, Complex64)]) -> SparseVec {
    let pav = project(convolve(v, support));
    let apv = convolve(&project(v.clone()), support);
    let mut out = pav;
    for (j, c) in apv {
        *out.entry(j).or_insert(Complex64::new(0.0, 0.0)) -= c;
    }
    out
}

fn basis(l: i64) -> SparseVec {
    let mut v = SparseVec::new();
    v.insert(l, Complex64::new(1.0, 0.0));
    v
}

fn describe(a: &CircleSymbol) -> String {
    match a.spec() {
        Some(spec) => format!("{spec:?}"),
        None => format!("coeffs(cutoff={})", a.cutoff()),
    }
}

fn check_tuple(symbols: &[CircleSymbol]) -> Result<usize, DixmierError> {
    if symbols.is_empty() || symbols.len() % 2 != 0 {
        return Err(DixmierError::BadParam(format!(
            "need a nonempty 2k-tuple of symbols, got {}",
            symbols.len()
        )));
    }
    Ok(symbols.len() / 2)
}

fn assemble(
    k: usize,
    truncation: usize,
    symbols: &[CircleSymbol],
    per_l: Vec<(Complex64, Option<f64>)>,
    n_list: &[usize],
    source: &str,
) -> Result<XiEstimate, DixmierError> {
    for &n in n_list {
        if n > truncation {
            return Err(DixmierError::BadParam(format!(
                "partial N = {n} exceeds diagonal truncation {truncation}"
            )));
        }
    }
    let diagonal: Vec<f64> = per_l.iter().map(|(d, _)| d.re).collect();
    let max_imag = per_l
        .iter()
        .map(|(d, _)| d.im.abs())
        .fold(0.0f64, f64::max);
    let validation_residual = per_l
        .iter()
        .filter_map(|(_, r)| *r)
        .fold(None, |acc: Option<f64>, r| Some(acc.unwrap_or(0.0).max(r)));
    let partials = signed_partials(&diagonal, n_list, source);
    Ok(XiEstimate {
        k,
        truncation,
        symbols: symbols.iter().map(describe).collect(),
        diagonal,
        max_imag,
        partials,
        validation_residual,
    })
}

/// Diagonal log-Cesàro estimate of the order-k functional: for each
/// 0 ≤ l ≤ n computes d_l = ⟨P[P,a₁]…[P,a_{2k}]P e_l, e_l⟩ by matrix-free
/// sparse application, and returns the Λ_N family of the real parts.
pub fn xi_diagonal_estimate(
    symbols: &[CircleSymbol],
    n: usize,
    n_list: &[usize],
) -> Result<XiEstimate, DixmierError> {
    let k = check_tuple(symbols)?;
    let supports: Vec<Vec<(i64, Complex64)>> = symbols.iter().map(symbol_support).collect();
    let per_l: Vec<(Complex64, Option<f64>)> = (0..=n as i64)
        .into_par_iter()
        .map(|l| {
            let mut v = basis(l); // P e_l = e_l for l ≥ 0.
            for support in supports.iter().rev() {
                v = commutator_apply(&v, support);
            }
            let v = project(v);
            let d = v.get(&l).copied().unwrap_or(Complex64::new(0.0, 0.0));
            (d, None)
        })
        .collect();
    assemble(k, n, symbols, per_l, n_list, &format!("xi{k} diagonal"))
}

/// Apply the pair commutator [[P,a],[P,b]] = [P,a][P,b] − [P,b][P,a].
fn pair_commutator_apply(
    v: &SparseVec,
    a: &[(i64, Complex64)],
    b: &[(i64, Complex64)],
) -> SparseVec {
    let ab = commutator_apply(&commutator_apply(v, b), a);
    let ba = commutator_apply(&commutator_apply(v, a), b);
    let mut out = ab;
    for (j, c) in ba {
        *out.entry(j).or_insert(Complex64::new(0.0, 0.0)) -= c;
    }
    out
}

/// Diagonal log-Cesàro estimate of the ζ-type functional
/// d_l = ⟨P[[P,a₁],[P,a₂]]…[[P,a_{2k−1}],[P,a_{2k}]]P e_l, e_l⟩.
///
/// Each diagonal entry is validated against the alternating-sum expansion of
/// the product of pair commutators into 2^k signed ξ-type products; the
/// largest deviation is reported in `validation_residual`.
pub fn zeta_estimate(
    symbols: &[CircleSymbol],
    n: usize,
    n_list: &[usize],
) -> Result<XiEstimate, DixmierError> {
    let k = check_tuple(symbols)?;
    let supports: Vec<Vec<(i64, Complex64)>> = symbols.iter().map(symbol_support).collect();
    let pairs: Vec<(&[(i64, Complex64)], &[(i64, Complex64)])> = supports
        .chunks(2)
        .map(|c| (c[0].as_slice(), c[1].as_slice()))
        .collect();
    let per_l: Vec<(Complex64, Option<f64>)> = (0..=n as i64)
        .into_par_iter()
        .map(|l| {
            // Direct: nested pair commutators, applied right to left.
            let mut v = basis(l);
            for &(a, b) in pairs.iter().rev() {
                v = pair_commutator_apply(&v, a, b);
            }
            let direct = project(v)
                .get(&l)
                .copied()
                .unwrap_or(Complex64::new(0.0, 0.0));

            // Expansion: Σ over swap patterns σ ∈ {0,1}^k of
            // (−1)^{|σ|}·Π_i (AB or BA), each term applied independently.
            let mut expanded = Complex64::new(0.0, 0.0);
            for mask in 0..(1u32 << k) {
                let mut v = basis(l);
                for (i, &(a, b)) in pairs.iter().enumerate().rev() {
                    let swap = (mask >> i) & 1 == 1;
                    let (first, second) = if swap { (b, a) } else { (a, b) };
                    v = commutator_apply(&commutator_apply(&v, second), first);
                }
                let sign = if mask.count_ones() % 2 == 0 { 1.0 } else { -1.0 };
                let d = project(v)
                    .get(&l)
                    .copied()
                    .unwrap_or(Complex64::new(0.0, 0.0));
                expanded += sign * d;
            }
            (direct, Some((direct - expanded).norm()))
        })
        .collect();
    assemble(k, n, symbols, per_l, n_list, &format!("zeta{k} diagonal"))
}

/// The order-2 diagonal estimate for the all-equal lacunary tuple
/// (W, W, W, W), computed through the exact lattice path: for real W and
/// l ≥ 0, P[P,W][P,W][P,W][P,W]P e_l has diagonal entry ‖P g_l‖², so each
/// d_l is a [`gamma_lattice_sum`] evaluation.  This reaches N = 2¹⁶ in
/// seconds where the generic sparse product would take hours.
pub fn xi2_lacunary_series(
    beta: f64,
    n_max: u32,
    n: usize,
    n_list: &[usize],
) -> Result<XiEstimate, DixmierError> {
    for &nn in n_list {
        if nn > n {
            return Err(DixmierError::BadParam(format!(
                "partial N = {nn} exceeds diagonal truncation {n}"
            )));
        }
    }
    let diagonal: Vec<f64> = (0..=n as u64)
        .into_par_iter()
        .map(|l| gamma_lattice_sum(l, beta, n_max).map(|g| g.value))
        .collect::<Result<_, _>>()?;
    let partials = signed_partials(&diagonal, n_list, "xi2 lacunary lattice path");
    Ok(XiEstimate {
        k: 2,
        truncation: n,
        symbols: vec![format!("Lacunary {{ beta: {beta}, n_max: {n_max} }}"); 4],
        diagonal,
        max_imag: 0.0,
        partials,
        validation_residual: None,
    })
}
