//! Test symbols on S¹ and the Littlewood–Paley machinery around them.
//!
//! A [`CircleSymbol`] is a finite two-sided Fourier series.  On top of it the
//! crate provides sampled Hölder seminorms, smooth dyadic block
//! decompositions with exact partition of unity on frequencies, Besov norms,
//! a K-functional upper-bound probe for real interpolation, and an
//! anisotropic 3-d block check on a periodic box modelling the Heisenberg
//! group scaling (weight 2 on the vertical frequency).
//!
//! Everything is deterministic: random symbols are generated from explicit
//! seeds, and all reductions run in fixed index order.

mod aniso;
mod blocks;
mod holder;
mod symbol;
mod window;

pub use aniso::{aniso_blocks_check, AnisoReport, GridFunction3};
pub use blocks::{besov_norm, lp_blocks, BesovQ, BlockDecomposition};
pub use holder::{
    besov_holder_equiv_check, holder_seminorm, k_functional_probe, EquivReport, HolderReport,
    KFunctionalReport,
};
pub use symbol::{make_lacunary, make_symbol, CircleSymbol, SymbolSpec};
pub use window::{num_blocks, window_weight};

use thiserror::Error;

/// Errors from symbol construction and measurements.
#[derive(Debug, Error)]
pub enum SymbolError {
    #[error("beta must lie in (0, 1], got {0}")]
    BadBeta(f64),
    #[error("malformed symbol spec: {0}")]
    BadSpec(String),
    #[error("grid must have at least {min} points, got {got}")]
    GridTooSmall { min: usize, got: usize },
    #[error("grid resolution must be a power of two per axis, got {0}")]
    GridNotPowerOfTwo(usize),
    #[error("anisotropic check requires horizontal dimension 2, got {0}")]
    WrongDimension(usize),
    #[error("corpus is empty")]
    EmptyCorpus,
    #[error("{0}")]
    Invalid(String),
}

#[cfg(test)]
mod tests;
