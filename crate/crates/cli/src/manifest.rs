//! Run manifests: enough provenance to re-run any output set bit-exactly.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub resolved_config: serde_json::Value,
    pub master_seed: u64,
    pub tool_version: String,
    /// SHA-256 per input file.
    pub input_digests: BTreeMap<String, String>,
    pub started_at_unix: u64,
    pub finished_at_unix: u64,
}

fn now_unix() -> u64 {
    SystemTime::now()
        .duration_since(UNIX_EPOCH)
        .map(|d| d.as_secs())
        .unwrap_or(0)
}

impl RunManifest {
    pub fn start(command: &str, argv: Vec<String>, seed: u64) -> Self {
        RunManifest {
            command: command.to_string(),
            argv,
            resolved_config: serde_json::Value::Null,
            master_seed: seed,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            input_digests: BTreeMap::new(),
            started_at_unix: now_unix(),
            finished_at_unix: 0,
        }
    }

    pub fn record_input(&mut self, path: &Path) -> std::io::Result<()> {
        let bytes = std::fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.input_digests.insert(path.display().to_string(), hex);
        Ok(())
    }

    pub fn set_config<T: Serialize>(&mut self, config: &T) {
        self.resolved_config =
            serde_json::to_value(config).unwrap_or(serde_json::Value::Null);
    }

    /// Stamps the end time and writes `manifest.json` into `out_dir`.
    pub fn write(mut self, out_dir: &Path) -> std::io::Result<PathBuf> {
        self.finished_at_unix = now_unix();
        let path = out_dir.join("manifest.json");
        let body = serde_json::to_string_pretty(&self).expect("manifest serializes");
        std::fs::write(&path, body)?;
        Ok(path)
    }
}
