use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use symbol_lab::SymbolSpec;

/// Full description of one experiment run.
///
/// The config is the unit of reproducibility: serializing it, hashing it, and
/// re-running it must reproduce identical numeric artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Base RNG seed threaded into every randomized component.
    pub seed: u64,
    /// Worker-thread count; None uses all cores (does not affect results).
    #[serde(default)]
    pub jobs: Option<usize>,
    /// Reuse cached spectra keyed by construction hash.
    #[serde(default)]
    pub cache: bool,
    pub task: TaskConfig,
}

/// The experiment to run; one variant per CLI subcommand.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskConfig {
    HeisCheck(HeisCheckParams),
    CcDist(CcDistParams),
    CcScan(CcScanParams),
    SymbolsHolder(SymbolsHolderParams),
    SymbolsBesov(SymbolsBesovParams),
    SymbolsKfun(SymbolsKfunParams),
    HardyHankel(HardyHankelParams),
    HardyCalderon(HardyCalderonParams),
    HardyFit(HardyFitParams),
    DixmierXi(DixmierXiParams),
    DixmierZeta(DixmierZetaParams),
    DixmierBounds(DixmierBoundsParams),
}

impl TaskConfig {
    /// Stable command name used in artifact files and manifest queries.
    pub fn name(&self) -> &'static str {
        match self {
            TaskConfig::HeisCheck(_) => "heis-check",
            TaskConfig::CcDist(_) => "cc-dist",
            TaskConfig::CcScan(_) => "cc-scan",
            TaskConfig::SymbolsHolder(_) => "symbols-holder",
            TaskConfig::SymbolsBesov(_) => "symbols-besov",
            TaskConfig::SymbolsKfun(_) => "symbols-kfun",
            TaskConfig::HardyHankel(_) => "hardy-hankel",
            TaskConfig::HardyCalderon(_) => "hardy-calderon",
            TaskConfig::HardyFit(_) => "hardy-fit",
            TaskConfig::DixmierXi(_) => "dixmier-xi",
            TaskConfig::DixmierZeta(_) => "dixmier-zeta",
            TaskConfig::DixmierBounds(_) => "dixmier-bounds",
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HeisCheckParams {
    /// Horizontal dimension (must be even).
    pub d: usize,
    /// Random points per axiom check.
    pub samples: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcDistParams {
    /// Vertical coordinate of the target point.
    pub t: f64,
    /// Horizontal coordinates of the target point.
    pub z: Vec<f64>,
    /// Mesh ceiling for the solver.
    pub m_max: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CcScanParams {
    pub samples: usize,
    /// Koranyi-ball radius for the sampled targets.
    pub radius: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsHolderParams {
    pub spec: SymbolSpec,
    pub alpha: f64,
    pub grid: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsBesovParams {
    /// Smoothness exponent of the comparison.
    pub s: f64,
    /// Number of corpus symbols generated from the seed.
    pub corpus: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SymbolsKfunParams {
    pub spec: SymbolSpec,
    pub theta: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyHankelParams {
    /// Lacunary weight exponent of the symbol.
    pub beta: f64,
    /// Dyadic truncation of the symbol.
    pub n_max: u32,
    /// Operator window half-width N.
    pub window: usize,
    /// Number of singular values to compute.
    pub top_k: usize,
}

/// Symbol choice for the first-order commutator probe.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CalderonSymbol {
    /// The triangle wave |θ| (Lipschitz): norms plateau.
    Triangle,
    /// The lacunary symbol at the given exponent: norms grow.
    Lacunary { beta: f64, n_max: u32 },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyCalderonParams {
    pub symbol: CalderonSymbol,
    /// Window sizes to probe.
    pub levels: Vec<usize>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HardyFitParams {
    pub beta: f64,
    pub n_max: u32,
    pub window: usize,
    pub top_k: usize,
    pub k_min: usize,
    pub k_max: usize,
}

/// Which symbol tuple feeds the order-2 diagonal estimator.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum XiTuple {
    /// All-equal lacunary tuple, evaluated through the exact lattice path.
    Lacunary { beta: f64, n_max: u32 },
    /// All-equal smooth tuple cos θ / 2, evaluated by sparse application.
    HalfCosine,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DixmierXiParams {
    pub tuple: XiTuple,
    /// Diagonal truncation N.
    pub n: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DixmierZetaParams {
    /// Diagonal truncation N.
    pub n: usize,
    /// Cutoff exponent of the random trig tuple (small keeps it sparse).
    pub spread: u32,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DixmierBoundsParams {
    pub l_max: u64,
    pub n_max: u32,
    /// Flag rows with oversized truncation tails instead of refusing.
    pub relaxed_tail: bool,
}

/// Hex SHA-256 of the canonical JSON serialization of the config.
pub fn config_hash(config: &ExperimentConfig) -> String {
    let json = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(json.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// First 12 hex digits, used in artifact file names.
pub fn short_hash(config: &ExperimentConfig) -> String {
    config_hash(config)[..12].to_string()
}
