//! Command-line laboratory front end: experiment configs, orchestration of
//! the geometry/symbol/operator/functional crates, artifact persistence
//! (CSV/JSON/JSONL), manifest bookkeeping, and SVG plot emission.

pub mod config;
pub mod manifest;
pub mod plot;
pub mod runner;

pub use config::{config_hash, short_hash, ExperimentConfig, TaskConfig};
pub use manifest::{load_manifest, manifest_query, write_manifest, RunManifest, TaskStatus};
pub use runner::{plot_from_manifest, run, standard_corpus, triangle_symbol, RunOutcome};

use thiserror::Error;

/// Top-level error with the CLI exit-code contract: usage errors exit 2,
/// numeric/task failures exit 1.
#[derive(Debug, Error)]
pub enum RunError {
    #[error("usage error: {0}")]
    Usage(String),
    #[error("{0}")]
    Numeric(String),
    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Usage(_) => 2,
            _ => 1,
        }
    }
}
