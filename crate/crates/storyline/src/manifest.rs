//! Run manifests: enough provenance to tell whether two runs must agree.

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::PipelineConfig;
use crate::error::{CliError, Result};
use crate::formats::write_json;

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub storyline_version: String,
    pub core_version: String,
    pub profile: String,
    /// Effective score threshold for commands that segment.
    pub score_threshold: Option<f64>,
    pub seed: u64,
    /// SHA-256 of the effective configuration as canonical JSON.
    pub config_hash: String,
    /// SHA-256 per input, keyed by role.
    pub inputs: BTreeMap<String, String>,
    /// SHA-256 per output file, keyed by file name.
    pub outputs: BTreeMap<String, String>,
    /// `SOURCE_DATE_EPOCH` when set, otherwise the wall clock.
    pub created_unix: u64,
}

impl RunManifest {
    pub fn new(command: &str, cfg: &PipelineConfig, score_threshold: Option<f64>) -> Self {
        Self {
            command: command.to_string(),
            storyline_version: env!("CARGO_PKG_VERSION").to_string(),
            core_version: storyline_core::VERSION.to_string(),
            profile: cfg.profile.name().to_string(),
            score_threshold,
            seed: cfg.seed,
            config_hash: sha256_hex(cfg.canonical_json().as_bytes()),
            inputs: BTreeMap::new(),
            outputs: BTreeMap::new(),
            created_unix: timestamp(),
        }
    }

    pub fn record_input(&mut self, role: &str, path: &Path) -> Result<()> {
        self.inputs.insert(role.to_string(), digest_path(path)?);
        Ok(())
    }

    pub fn record_output(&mut self, name: &str, bytes: &[u8]) {
        self.outputs.insert(name.to_string(), sha256_hex(bytes));
    }

    pub fn write(&self, dir: &Path) -> Result<()> {
        write_json(&dir.join(MANIFEST_FILE), self)
    }
}

fn timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|s| s.trim().parse().ok())
        .unwrap_or_else(|| {
            std::time::SystemTime::now()
                .duration_since(std::time::UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        })
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Digest of a file, or of a directory's regular files taken in name order
/// (name and contents both count).
pub fn digest_path(path: &Path) -> Result<String> {
    if path.is_dir() {
        let mut entries: Vec<_> = std::fs::read_dir(path)
            .map_err(|e| CliError::io(path, e))?
            .filter_map(|e| e.ok().map(|e| e.path()))
            .filter(|p| p.is_file())
            .collect();
        entries.sort();
        let mut h = Sha256::new();
        for p in entries {
            let name = p
                .file_name()
                .map(|n| n.to_string_lossy().into_owned())
                .unwrap_or_default();
            if name == MANIFEST_FILE {
                continue;
            }
            h.update(name.as_bytes());
            h.update([0]);
            h.update(std::fs::read(&p).map_err(|e| CliError::io(&p, e))?);
        }
        Ok(hex::encode(h.finalize()))
    } else {
        Ok(sha256_hex(&std::fs::read(path).map_err(|e| CliError::io(path, e))?))
    }
}
