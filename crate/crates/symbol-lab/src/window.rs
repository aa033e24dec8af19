//! The smooth dyadic frequency window.
//!
//! A fixed C^∞ cut-off χ with χ ≡ 1 on [0, 1] and χ ≡ 0 on [2, ∞) generates
//! the block windows
//!
//! ```text
//! φ_0(r) = χ(r),    φ_j(r) = χ(2^{−j} r) − χ(2^{1−j} r)   (j ≥ 1),
//! ```
//!
//! so φ_j is supported in the open annulus 2^{j−1} < r < 2^{j+1} and the sum
//! Σ_{j≤J} φ_j telescopes to χ(2^{−J} r) — an exact partition of unity (even
//! in floating point, since the cancelling evaluations share their argument
//! bit-for-bit) for every r below 2^J.

/// Smooth transition exp-bump: 0 for x ≤ 0, 1 for x ≥ 1, C^∞ monotone.
fn smoothstep(x: f64) -> f64 {
    if x <= 0.0 {
        0.0
    } else if x >= 1.0 {
        1.0
    } else {
        let a = (-1.0 / x).exp();
        let b = (-1.0 / (1.0 - x)).exp();
        a / (a + b)
    }
}

/// The C^∞ cut-off χ: 1 on [0, 1], 0 on [2, ∞), strictly decreasing between.
pub(crate) fn chi(r: f64) -> f64 {
    smoothstep(2.0 - r)
}

/// Window weight φ_j(|k|) applied to frequency k by block j.
pub fn window_weight(j: usize, k: i64) -> f64 {
    let r = k.unsigned_abs() as f64;
    if j == 0 {
        chi(r)
    } else {
        let scale = 2f64.powi(-(j as i32));
        chi(scale * r) - chi(2.0 * scale * r)
    }
}

/// Number of blocks needed to cover frequencies up to |k| = top: the smallest
/// J with χ(2^{−(J−1)}·top) = 1, plus one trailing empty-safe block.
pub fn num_blocks(top: usize) -> usize {
    let mut j = 1usize;
    while (1usize << (j - 1)) < top.max(1) {
        j += 1;
    }
    j + 1
}
