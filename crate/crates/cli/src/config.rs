//! Run configuration shared by the subcommands.

use std::path::PathBuf;

use clap::ValueEnum;
use serde::{Deserialize, Serialize};

use qprimes_core::circuit::SynthesisMode;

/// How each grid-point purity is produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Backend {
    /// Evolve the width-q register and take the exact partial-trace purity.
    ExactTrace,
    /// Run the full width-(2q+1) swap-test circuit and read P0 exactly.
    SwapExact,
    /// Exact-trace purity converted to P0 and Bernoulli-sampled per shot;
    /// statistically identical to measuring the full circuit.
    FastSampled,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Format {
    Csv,
    Json,
}

impl Format {
    pub fn extension(&self) -> &'static str {
        match self {
            Format::Csv => "csv",
            Format::Json => "json",
        }
    }
}

/// Widest register the swap-exact backend will allocate (2q + 1 qubits,
/// 512 MiB of complex doubles at width 25, which covers d = 64).
pub const SWAP_EXACT_MAX_WIDTH: usize = 25;

/// Runs at or above this dimension need the explicit `--large` flag.
pub const LARGE_DIMENSION: usize = 64;

/// Default partition count: `375 d^2 / 256` rounded up to the next even
/// integer. This reproduces the reference settings 1500 (d = 32) and 6000
/// (d = 64) exactly and rounds the d = 16 value of 375 up to 376, since
/// composite Simpson integration needs an even interval count.
pub fn default_partitions(d: usize) -> usize {
    let p = (375 * d * d).div_ceil(256);
    p + p % 2
}

pub const DEFAULT_OMEGA: f64 = 0.1;
pub const DEFAULT_SHOTS: u64 = 100_000;
pub const DEFAULT_SEED: u64 = 20_240_501;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunConfig {
    pub d: usize,
    pub omega: f64,
    pub partitions: usize,
    pub shots: u64,
    pub seed: u64,
    pub backend: Backend,
    pub synthesis: SynthesisMode,
    pub regime_iii: bool,
    pub threads: Option<usize>,
    pub large: bool,
    #[serde(skip)]
    pub out_dir: PathBuf,
    pub format: Format,
}

impl RunConfig {
    pub fn new(d: usize) -> Self {
        Self {
            d,
            omega: DEFAULT_OMEGA,
            partitions: default_partitions(d),
            shots: DEFAULT_SHOTS,
            seed: DEFAULT_SEED,
            backend: Backend::FastSampled,
            synthesis: SynthesisMode::Faithful,
            regime_iii: false,
            threads: None,
            large: false,
            out_dir: PathBuf::from("."),
            format: Format::Csv,
        }
    }

    pub fn qubits(&self) -> usize {
        2 * self.d.trailing_zeros() as usize
    }

    pub fn output_path(&self, stem: &str) -> PathBuf {
        self.out_dir
            .join(format!("{stem}_d{}.{}", self.d, self.format.extension()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn partition_defaults() {
        assert_eq!(default_partitions(16), 376);
        assert_eq!(default_partitions(32), 1500);
        assert_eq!(default_partitions(64), 6000);
        assert_eq!(default_partitions(4), 24);
        assert_eq!(default_partitions(8), 94);
        for d in [2usize, 4, 8, 16, 32, 64] {
            let p = default_partitions(d);
            assert_eq!(p % 2, 0, "d={d}");
            assert!(p >= d * d, "d={d}: p={p} below the band limit");
        }
    }
}
