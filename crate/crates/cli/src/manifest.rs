//! Run manifests: every command records its resolved inputs, a content hash
//! of the config file, and the paths it wrote. Reruns with identical inputs
//! produce byte-identical manifests (no timestamps).

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::config::ScenarioConfig;

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub tool_version: String,
    pub config_path: String,
    pub config_sha256: String,
    pub seed: u64,
    pub outputs: Vec<String>,
    pub assumptions: Vec<String>,
    pub resolved_config: ScenarioConfig,
}

impl RunManifest {
    pub fn new(command: &str, config_path: &Path, config: &ScenarioConfig) -> Result<Self> {
        let bytes = std::fs::read(config_path)
            .with_context(|| format!("hashing {}", config_path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        let digest = hasher.finalize();
        Ok(Self {
            command: command.to_string(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            config_path: config_path.display().to_string(),
            config_sha256: format!("{digest:x}"),
            seed: config.run.seed,
            outputs: Vec::new(),
            assumptions: config.assumptions(),
            resolved_config: config.clone(),
        })
    }

    pub fn record(&mut self, path: &Path) -> PathBuf {
        self.outputs.push(path.display().to_string());
        path.to_path_buf()
    }

    pub fn write(&self, out_dir: &Path) -> Result<PathBuf> {
        let path = out_dir.join(format!("manifest_{}.json", self.command));
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json).with_context(|| format!("writing {}", path.display()))?;
        Ok(path)
    }
}
