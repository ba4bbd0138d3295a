//! Run manifests: inputs, seed, version, and a SHA-256 per artifact.
//!
//! Manifests carry file names, never paths or timestamps, so re-running
//! with the same configuration reproduces the manifest byte for byte.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use anyhow::{bail, Context, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub version: String,
    pub subcommand: String,
    pub spec_name: String,
    pub spec_sha256: String,
    pub seed: Option<u64>,
    pub depth: usize,
    pub parameters: BTreeMap<String, String>,
    pub artifacts: Vec<ArtifactEntry>,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct ArtifactEntry {
    pub name: String,
    pub sha256: String,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    format!("{:x}", hasher.finalize())
}

impl Manifest {
    pub fn new(
        subcommand: &str,
        spec_path: &Path,
        seed: Option<u64>,
        depth: usize,
        parameters: BTreeMap<String, String>,
    ) -> Result<Self> {
        let spec_bytes = fs::read(spec_path)
            .with_context(|| format!("cannot read {}", spec_path.display()))?;
        let spec_name = spec_path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_else(|| "spec.json".into());
        Ok(Manifest {
            tool: "semithermo".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            subcommand: subcommand.into(),
            spec_name,
            spec_sha256: sha256_hex(&spec_bytes),
            seed,
            depth,
            parameters,
            artifacts: Vec::new(),
        })
    }

    /// Writes one artifact into `out_dir` and records its hash.
    pub fn write_artifact(&mut self, out_dir: &Path, name: &str, bytes: &[u8]) -> Result<()> {
        let path = out_dir.join(name);
        fs::write(&path, bytes).with_context(|| format!("cannot write {}", path.display()))?;
        self.artifacts.push(ArtifactEntry { name: name.into(), sha256: sha256_hex(bytes) });
        Ok(())
    }

    /// Writes `manifest.json` into `out_dir`.
    pub fn finish(&self, out_dir: &Path) -> Result<()> {
        let json = serde_json::to_string_pretty(self).context("serialize manifest")?;
        fs::write(out_dir.join("manifest.json"), json + "\n").context("write manifest")?;
        Ok(())
    }
}

/// Re-hashes every artifact referenced by the manifest in `dir`.
pub fn verify_manifest(dir: &Path) -> Result<Manifest> {
    let text = fs::read_to_string(dir.join("manifest.json")).context("read manifest.json")?;
    let manifest: Manifest = serde_json::from_str(&text).context("parse manifest.json")?;
    for entry in &manifest.artifacts {
        let path = dir.join(&entry.name);
        let bytes =
            fs::read(&path).with_context(|| format!("missing artifact {}", path.display()))?;
        let actual = sha256_hex(&bytes);
        if actual != entry.sha256 {
            bail!(
                "artifact {} hash mismatch: manifest {}, file {}",
                entry.name,
                entry.sha256,
                actual
            );
        }
    }
    Ok(manifest)
}
