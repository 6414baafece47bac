//! Subcommand implementations. Each writes its artifact(s), records them in
//! a manifest, and reports anything exit-code-relevant back to `main`.

use std::path::{Path, PathBuf};

use rayon::prelude::*;

use qprimes_core::circuit::{audit_gates, build_pipeline, GateCountReport, PipelineMode};
use qprimes_core::primality::{classify, default_tolerance, ClassificationReport};
use qprimes_core::sim::{
    derive_seed, reduced_purity_exact, run_circuit, sample_purity, swap_test_p0, PurityMethod,
};
use qprimes_core::spectral::{
    max_mode, simpson_fourier, FourierSpectrum, InitialCoefficients, PuritySeries, SeriesPoint,
};
use qprimes_core::walsh::{closed_form_spectrum, phase_vector, walsh_transform, EvolutionParams};

use crate::config::{Backend, RunConfig, LARGE_DIMENSION, SWAP_EXACT_MAX_WIDTH};
use crate::formats::{self, AnglesFile};
use crate::manifest::RunManifest;
use crate::{CliError, CliResult};

fn validate(config: &RunConfig) -> CliResult<()> {
    if config.d < 2 || !config.d.is_power_of_two() {
        return Err(CliError::Config(format!(
            "d = {} is not a power of two (>= 2)",
            config.d
        )));
    }
    if !(config.omega > 0.0) || !config.omega.is_finite() {
        return Err(CliError::Config(format!("omega = {} invalid", config.omega)));
    }
    if config.partitions == 0 || config.partitions % 2 != 0 {
        return Err(CliError::Config(format!(
            "partitions = {} must be a positive even interval count (composite Simpson)",
            config.partitions
        )));
    }
    Ok(())
}

fn validate_sweep(config: &RunConfig) -> CliResult<()> {
    validate(config)?;
    if config.d >= LARGE_DIMENSION && !config.large {
        return Err(CliError::Config(format!(
            "d = {} sweeps {} circuit executions; pass --large to confirm",
            config.d,
            (config.partitions + 1) as u64 * config.shots.max(1)
        )));
    }
    if config.backend == Backend::SwapExact && 2 * config.qubits() + 1 > SWAP_EXACT_MAX_WIDTH {
        return Err(CliError::Resource(format!(
            "swap-exact needs a width-{} statevector (limit {}); use --backend fast-sampled",
            2 * config.qubits() + 1,
            SWAP_EXACT_MAX_WIDTH
        )));
    }
    Ok(())
}

fn thread_pool(config: &RunConfig) -> CliResult<rayon::ThreadPool> {
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = config.threads {
        builder = builder.num_threads(n);
    }
    builder
        .build()
        .map_err(|e| CliError::Config(format!("thread pool: {e}")))
}

fn simulate_point(config: &RunConfig, index: usize, h: f64) -> CliResult<SeriesPoint> {
    let t = index as f64 * h;
    let params = EvolutionParams::new(config.omega, t, config.d)?;
    match config.backend {
        Backend::SwapExact => {
            let circuit =
                build_pipeline(config.d, &params, PipelineMode::SwapTest, config.synthesis)?;
            let p0 = swap_test_p0(&run_circuit(&circuit.without_measurements())?);
            Ok(SeriesPoint {
                t,
                gamma: 2.0 * p0 - 1.0,
                method: PurityMethod::SwapExact,
                shots: 0,
                p0: Some(p0),
                seed: None,
            })
        }
        Backend::ExactTrace | Backend::FastSampled => {
            let circuit =
                build_pipeline(config.d, &params, PipelineMode::StateOnly, config.synthesis)?;
            let state = run_circuit(&circuit)?;
            let gamma = reduced_purity_exact(&state, config.qubits() / 2)?.value;
            if config.backend == Backend::ExactTrace || config.shots == 0 {
                return Ok(SeriesPoint {
                    t,
                    gamma,
                    method: PurityMethod::ExactTrace,
                    shots: 0,
                    p0: None,
                    seed: None,
                });
            }
            let p0 = (1.0 + gamma) / 2.0;
            let seed = derive_seed(config.seed, index as u64);
            let estimate = sample_purity(p0, config.shots, seed)?;
            Ok(SeriesPoint {
                t,
                gamma: estimate.value,
                method: estimate.method,
                shots: estimate.shots,
                p0: estimate.p0,
                seed: Some(seed),
            })
        }
    }
}

/// The purity sweep over `partitions + 1` grid points on `[0, T/2]`.
/// Points are computed in parallel and placed by index, so the result does
/// not depend on the thread count.
pub fn sweep_series(config: &RunConfig) -> CliResult<PuritySeries> {
    validate_sweep(config)?;
    let h = std::f64::consts::PI / config.omega / config.partitions as f64;
    let pool = thread_pool(config)?;
    let points: CliResult<Vec<SeriesPoint>> = pool.install(|| {
        (0..=config.partitions)
            .into_par_iter()
            .map(|i| simulate_point(config, i, h))
            .collect()
    });
    Ok(PuritySeries::new(
        config.d,
        config.omega,
        config.partitions,
        points?,
    )?)
}

/// Seeds the manifest records for a sampled sweep.
fn sweep_seeds(config: &RunConfig) -> Vec<u64> {
    if config.backend == Backend::FastSampled && config.shots > 0 {
        (0..=config.partitions as u64)
            .map(|i| derive_seed(config.seed, i))
            .collect()
    } else {
        Vec::new()
    }
}

pub struct AnglesOutcome {
    pub path: PathBuf,
    pub entries: usize,
    pub verified: Option<bool>,
}

pub fn cmd_angles(config: &RunConfig, t: Option<f64>, verify: bool) -> CliResult<AnglesOutcome> {
    validate(config)?;
    let mut manifest = RunManifest::new("angles", config);
    let spectrum = manifest.stage("closed-form", || closed_form_spectrum(config.d))?;
    let verified = if verify {
        let brute = manifest.stage("verify-brute-force", || {
            Ok::<_, qprimes_core::Error>(walsh_transform(&phase_vector(config.d)?))
        })?;
        Some(brute == spectrum)
    } else {
        None
    };
    let file = AnglesFile::new(config.d, &spectrum, t.map(|t| (config.omega, t)));
    let path = config.output_path("angles");
    manifest.stage("write", || formats::write_angles(&path, &file, config.format))?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "angles"))?;
    if verified == Some(false) {
        return Err(CliError::Disagreement(
            "closed-form spectrum disagrees with the brute-force transform".to_string(),
        ));
    }
    Ok(AnglesOutcome {
        path,
        entries: file.entries.len(),
        verified,
    })
}

pub fn cmd_synth(
    config: &RunConfig,
    t: f64,
    pipeline: PipelineMode,
) -> CliResult<(PathBuf, usize)> {
    validate(config)?;
    let mut manifest = RunManifest::new("synth", config);
    let params = EvolutionParams::new(config.omega, t, config.d)?;
    let circuit = manifest.stage("synthesize", || {
        build_pipeline(config.d, &params, pipeline, config.synthesis)
    })?;
    let path = config
        .out_dir
        .join(format!("circuit_d{}.json", config.d));
    manifest.stage("write", || formats::write_json(&path, &circuit))?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "synth"))?;
    Ok((path, circuit.len()))
}

pub fn cmd_simulate(config: &RunConfig) -> CliResult<(PuritySeries, PathBuf)> {
    let mut manifest = RunManifest::new("simulate", config);
    let series = manifest.stage("sweep", || sweep_series(config))?;
    manifest.seeds = sweep_seeds(config);
    let path = config.output_path("series");
    manifest.stage("write", || formats::write_series(&path, &series, config.format))?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "simulate"))?;
    Ok((series, path))
}

/// Simpson modes of a series, with uniform-state bounds attached. Covers
/// `n <= 2(d-1)` unless regime III is requested.
pub fn spectrum_from_series(
    series: &PuritySeries,
    regime_iii: bool,
) -> CliResult<FourierSpectrum> {
    let nmax = if regime_iii {
        max_mode(series.d())
    } else {
        2 * (series.d() - 1)
    };
    let mut spectrum = simpson_fourier(series, nmax)?;
    spectrum.attach_bounds(&InitialCoefficients::uniform(series.d())?)?;
    Ok(spectrum)
}

pub fn cmd_spectrum(
    config: &RunConfig,
    series_path: &Path,
) -> CliResult<(FourierSpectrum, PathBuf)> {
    validate(config)?;
    let mut manifest = RunManifest::new("spectrum", config);
    let series = manifest.stage("read-series", || {
        formats::read_series(series_path, Some(config.d))
    })?;
    let spectrum = manifest.stage("simpson", || {
        spectrum_from_series(&series, config.regime_iii)
    })?;
    let path = config.output_path("spectrum");
    manifest.stage("write", || {
        formats::write_spectrum(&path, &spectrum, config.format)
    })?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "spectrum"))?;
    Ok((spectrum, path))
}

pub struct ClassifyOutcome {
    pub report: ClassificationReport,
    pub path: PathBuf,
}

impl ClassifyOutcome {
    pub fn agrees(&self) -> bool {
        self.report.sieve_agrees_on_decidable()
    }
}

/// Classify a spectrum. The tolerance defaults to
/// [`default_tolerance`]`(d, shots, partitions)` from the supplied config,
/// so noiseless chains should run with `shots = 0`.
pub fn cmd_classify(
    config: &RunConfig,
    spectrum_path: &Path,
    tau: Option<f64>,
) -> CliResult<ClassifyOutcome> {
    validate(config)?;
    let mut manifest = RunManifest::new("classify", config);
    let spectrum = manifest.stage("read-spectrum", || {
        formats::read_spectrum(spectrum_path, Some(config.d))
    })?;
    let tau = match tau {
        Some(t) => t,
        None => default_tolerance(config.d, config.shots, config.partitions)?,
    };
    let report = manifest.stage("classify", || classify(&spectrum, tau))?;
    let path = config.output_path("classification");
    manifest.stage("write", || {
        formats::write_classification(&path, &report, config.format)
    })?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "classify"))?;
    Ok(ClassifyOutcome { report, path })
}

pub fn cmd_audit(
    config: &RunConfig,
    t: f64,
    pipeline: PipelineMode,
) -> CliResult<(GateCountReport, PathBuf)> {
    validate(config)?;
    let mut manifest = RunManifest::new("audit", config);
    let params = EvolutionParams::new(config.omega, t, config.d)?;
    let circuit = manifest.stage("synthesize", || {
        build_pipeline(config.d, &params, pipeline, config.synthesis)
    })?;
    let report = manifest.stage("audit", || audit_gates(&circuit, config.d))?;
    let path = config
        .out_dir
        .join(format!("audit_d{}.json", config.d));
    manifest.stage("write", || formats::write_json(&path, &report))?;
    manifest.record_output(&path)?;
    manifest.write(&RunManifest::path_for(config, "audit"))?;
    Ok((report, path))
}

pub struct RunAllOutcome {
    pub series_path: PathBuf,
    pub spectrum_path: PathBuf,
    pub classify: ClassifyOutcome,
    pub audit_path: PathBuf,
}

pub fn cmd_run_all(config: &RunConfig) -> CliResult<RunAllOutcome> {
    let mut manifest = RunManifest::new("run-all", config);
    let series = manifest.stage("sweep", || sweep_series(config))?;
    manifest.seeds = sweep_seeds(config);
    let series_path = config.output_path("series");
    formats::write_series(&series_path, &series, config.format)?;
    manifest.record_output(&series_path)?;

    let spectrum = manifest.stage("simpson", || {
        spectrum_from_series(&series, config.regime_iii)
    })?;
    let spectrum_path = config.output_path("spectrum");
    formats::write_spectrum(&spectrum_path, &spectrum, config.format)?;
    manifest.record_output(&spectrum_path)?;

    let tau = default_tolerance(config.d, config.shots, config.partitions)?;
    let report = manifest.stage("classify", || classify(&spectrum, tau))?;
    let classification_path = config.output_path("classification");
    formats::write_classification(&classification_path, &report, config.format)?;
    manifest.record_output(&classification_path)?;

    let params = EvolutionParams::new(config.omega, 1.0, config.d)?;
    let circuit = build_pipeline(config.d, &params, PipelineMode::SwapTest, config.synthesis)?;
    let audit = manifest.stage("audit", || audit_gates(&circuit, config.d))?;
    let audit_path = config.out_dir.join(format!("audit_d{}.json", config.d));
    formats::write_json(&audit_path, &audit)?;
    manifest.record_output(&audit_path)?;

    manifest.write(&RunManifest::path_for(config, "run-all"))?;
    Ok(RunAllOutcome {
        series_path,
        spectrum_path,
        classify: ClassifyOutcome {
            report,
            path: classification_path,
        },
        audit_path,
    })
}
