//! Hardy-space operators on S¹ in the Fourier basis.
//!
//! Vectors are coefficient sequences on the symmetric window −N..N (index
//! k + N).  The crate provides the Szegő projection P onto nonnegative
//! frequencies, multiplication operators realized by convolution (sparse and
//! FFT paths), the Hankel operator (1−P)aP, the commutator [P, a], a
//! first-order commutator probe with matrix (|j|−|k|)·f̂(j−k), singular-value
//! computation (dense SVD for small windows, Golub–Kahan–Lanczos
//! bidiagonalization with full reorthogonalization beyond), and weak-Schatten
//! diagnostics on the resulting spectra.

mod calderon;
mod ops;
mod svd;

pub use calderon::{calderon_norm_probe, operator_norm, CalderonEntry, CalderonReport};
pub use ops::{
    calderon_d, commutator_p, hankel_op, multiply, multiply_fft, multiply_sparse, szego_project,
    OpKind, TruncatedOperator,
};
pub use svd::{
    decay_fit, singular_values, singular_values_with_method, weak_schatten_quasinorm, FitWindow,
    SchattenFit, SingularSpectrum, SpectrumMethod, DENSE_LIMIT,
};

use thiserror::Error;

/// Errors from operator construction and spectral computations.
#[derive(Debug, Error)]
pub enum HardyError {
    #[error("vector length {got} does not match window size {expected}")]
    BadLength { expected: usize, got: usize },
    #[error("invalid parameter: {0}")]
    BadParam(String),
    #[error("power iteration failed to converge within {iters} iterations (last estimate {last})")]
    PowerIterationStagnated { iters: usize, last: f64 },
    #[error("bidiagonalization broke down after {restarts} restarts")]
    LanczosBreakdown { restarts: usize },
    #[error("fit window contains only {got} usable points, need at least {min}")]
    WindowTooSmall { min: usize, got: usize },
    #[error(transparent)]
    Symbol(#[from] symbol_lab::SymbolError),
}
