//! Run manifests: every output CSV is accompanied by a JSON record of the
//! command, its full parameter set, seeds, library version, input digests,
//! and a timestamp. Reruns with identical parameters and inputs produce
//! byte-identical CSVs.

use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub input_digests: Vec<InputDigest>,
    pub timestamp: String,
}

#[derive(Debug, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

impl RunManifest {
    pub fn new(command: &str, parameters: serde_json::Value, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            parameters,
            seed,
            version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: Vec::new(),
            timestamp: chrono::Utc::now().to_rfc3339(),
        }
    }

    pub fn digest_input(&mut self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let bytes =
            std::fs::read(path).with_context(|| format!("reading input {}", path.display()))?;
        let mut hasher = Sha256::new();
        hasher.update(&bytes);
        self.input_digests.push(InputDigest {
            path: path.display().to_string(),
            sha256: hex::encode(hasher.finalize()),
        });
        Ok(())
    }

    /// Writes the manifest next to `output` as `<stem>.manifest.json`.
    pub fn write_for(&self, output: impl AsRef<Path>) -> Result<PathBuf> {
        let output = output.as_ref();
        let path = manifest_path(output);
        let json = serde_json::to_string_pretty(self).context("serializing manifest")?;
        std::fs::write(&path, json)
            .with_context(|| format!("writing manifest {}", path.display()))?;
        Ok(path)
    }
}

pub fn manifest_path(output: &Path) -> PathBuf {
    let stem = output.file_stem().unwrap_or_default().to_string_lossy();
    output.with_file_name(format!("{stem}.manifest.json"))
}

/// Validates before writing: the full output is built in memory and
/// written in one call, so failures never leave a partial CSV behind.
pub fn write_atomic(path: impl AsRef<Path>, content: &str) -> Result<()> {
    let path = path.as_ref();
    std::fs::write(path, content).with_context(|| format!("writing output {}", path.display()))
}
