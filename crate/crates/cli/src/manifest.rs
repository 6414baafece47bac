//! Run manifests: config echo, version, per-stage timings, per-point seeds
//! and checksums of every written artifact. Identical config and seed yield
//! identical output checksums regardless of thread count.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::config::RunConfig;
use crate::CliResult;

#[derive(Debug, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct StageTiming {
    pub stage: String,
    pub seconds: f64,
}

#[derive(Debug, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: RunConfig,
    pub timings: Vec<StageTiming>,
    /// Per-time-point sampling seeds (empty for commands that draw nothing).
    pub seeds: Vec<u64>,
    pub outputs: Vec<OutputRecord>,
}

impl RunManifest {
    pub fn new(command: &str, config: &RunConfig) -> Self {
        RunManifest {
            tool: "qprimes".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            command: command.to_string(),
            config: config.clone(),
            timings: Vec::new(),
            seeds: Vec::new(),
            outputs: Vec::new(),
        }
    }

    /// Time a stage and record it.
    pub fn stage<T>(&mut self, name: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        self.timings.push(StageTiming {
            stage: name.to_string(),
            seconds: start.elapsed().as_secs_f64(),
        });
        out
    }

    /// Checksum a written artifact and record it.
    pub fn record_output(&mut self, path: &Path) -> CliResult<()> {
        let bytes = fs::read(path)?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.outputs.push(OutputRecord {
            path: path.display().to_string(),
            sha256: hex,
        });
        Ok(())
    }

    pub fn path_for(config: &RunConfig, command: &str) -> PathBuf {
        config
            .out_dir
            .join(format!("manifest_{command}_d{}.json", config.d))
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        crate::formats::write_json(path, self)
    }
}
