use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::{Deserialize, Serialize};

use crate::config::ExperimentConfig;
use crate::RunError;

/// Per-task outcome inside a run.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TaskStatus {
    pub name: String,
    /// "ok" or "failed: <reason>".
    pub status: String,
    pub seconds: f64,
}

/// Record of one completed (or failed) run: the config, its hash, and every
/// artifact the run emitted.  Written last, after all artifacts.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: ExperimentConfig,
    pub config_hash: String,
    pub created_unix: u64,
    pub tasks: Vec<TaskStatus>,
    /// Artifact paths relative to the manifest's directory.
    pub artifacts: Vec<String>,
}

impl RunManifest {
    pub fn new(config: ExperimentConfig, config_hash: String) -> Self {
        RunManifest {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: config.task.name().to_string(),
            config,
            config_hash,
            created_unix: SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0),
            tasks: Vec::new(),
            artifacts: Vec::new(),
        }
    }
}

/// Write the manifest as `manifest-<short-hash>.json` in `dir`.
pub fn write_manifest(dir: &Path, manifest: &RunManifest) -> Result<PathBuf, RunError> {
    let path = dir.join(format!("manifest-{}.json", &manifest.config_hash[..12]));
    let json = serde_json::to_string_pretty(manifest)
        .map_err(|e| RunError::Numeric(format!("manifest serialization: {e}")))?;
    fs::write(&path, json).map_err(RunError::from)?;
    Ok(path)
}

pub fn load_manifest(path: &Path) -> Result<RunManifest, RunError> {
    let text = fs::read_to_string(path)?;
    serde_json::from_str(&text)
        .map_err(|e| RunError::Usage(format!("malformed manifest {}: {e}", path.display())))
}

/// List manifests in `dir`, optionally restricted to one command name,
/// newest first.
pub fn manifest_query(dir: &Path, command: Option<&str>) -> Result<Vec<RunManifest>, RunError> {
    let mut found = Vec::new();
    if !dir.exists() {
        return Ok(found);
    }
    let entries = fs::read_dir(dir)?;
    for entry in entries {
        let path = entry?.path();
        let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
        if !name.starts_with("manifest-") || !name.ends_with(".json") {
            continue;
        }
        let manifest = load_manifest(&path)?;
        if command.is_none_or(|c| manifest.command == c) {
            found.push(manifest);
        }
    }
    found.sort_by(|a, b| {
        b.created_unix
            .cmp(&a.created_unix)
            .then_with(|| a.config_hash.cmp(&b.config_hash))
    });
    Ok(found)
}
