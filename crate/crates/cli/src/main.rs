use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use qprimes::commands;
use qprimes::config::{
    Backend, Format, RunConfig, DEFAULT_OMEGA, DEFAULT_SEED, DEFAULT_SHOTS,
};
use qprimes::CliError;
use qprimes_core::circuit::{PipelineMode, SynthesisMode};

#[derive(Parser)]
#[command(
    name = "qprimes",
    version,
    about = "Prime identification from the simulated entanglement dynamics of a coupled qubit register"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Subsystem dimension d (a power of two; the register has q = 2 log2 d qubits)
    #[arg(long)]
    d: usize,
    /// Angular frequency of the coupling (1/time units)
    #[arg(long, default_value_t = DEFAULT_OMEGA)]
    omega: f64,
    /// Directory for output files
    #[arg(long, env = "QPRIMES_OUT_DIR", default_value = ".")]
    out_dir: PathBuf,
    /// Output format for tabular artifacts
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
}

#[derive(Args)]
struct SweepArgs {
    /// Simpson interval count over [0, T/2]; default scales as 375 d^2 / 256
    /// rounded up to even (1500 at d = 32, 6000 at d = 64)
    #[arg(long)]
    partitions: Option<usize>,
    /// Shots per time point; 0 means exact values
    #[arg(long, default_value_t = DEFAULT_SHOTS)]
    shots: u64,
    /// Base seed; per-point seeds derive deterministically from it
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    /// Purity backend
    #[arg(long, value_enum, default_value_t = Backend::FastSampled)]
    backend: Backend,
    /// Keep zero-angle rotations (faithful) or prune them (optimized)
    #[arg(long, value_enum, default_value_t = SynthArg::Faithful)]
    synthesis: SynthArg,
    /// Worker threads for the time sweep (default: all cores)
    #[arg(long)]
    threads: Option<usize>,
    /// Confirm a d >= 64 sweep
    #[arg(long)]
    large: bool,
    /// Extend the mode spectrum beyond 2(d-1) into regime III
    #[arg(long)]
    regime_iii: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SynthArg {
    Faithful,
    Optimized,
}

impl From<SynthArg> for SynthesisMode {
    fn from(value: SynthArg) -> Self {
        match value {
            SynthArg::Faithful => SynthesisMode::Faithful,
            SynthArg::Optimized => SynthesisMode::Optimized,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum PipelineArg {
    StateOnly,
    SwapTest,
}

impl From<PipelineArg> for PipelineMode {
    fn from(value: PipelineArg) -> Self {
        match value {
            PipelineArg::StateOnly => PipelineMode::StateOnly,
            PipelineArg::SwapTest => PipelineMode::SwapTest,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Write the sparse Walsh angles of the evolution
    Angles {
        #[command(flatten)]
        common: CommonArgs,
        /// Also emit time-scaled angles a_j(t) at this time
        #[arg(long)]
        t: Option<f64>,
        /// Cross-check the closed form against the brute-force transform
        #[arg(long)]
        verify: bool,
    },
    /// Write the synthesized pipeline circuit as JSON
    Synth {
        #[command(flatten)]
        common: CommonArgs,
        /// Evolution time of the synthesized circuit
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = PipelineArg::SwapTest)]
        mode: PipelineArg,
        #[arg(long, value_enum, default_value_t = SynthArg::Faithful)]
        synthesis: SynthArg,
    },
    /// Sweep the purity over [0, T/2] and write the series
    Simulate {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
    /// Extract Fourier modes from a purity series by Simpson quadrature
    Spectrum {
        #[command(flatten)]
        common: CommonArgs,
        /// Purity series file (csv or json) produced by `simulate`
        #[arg(long)]
        series: PathBuf,
        /// Extend the spectrum beyond 2(d-1) into regime III
        #[arg(long)]
        regime_iii: bool,
    },
    /// Classify each mode as prime/composite against the lower bound
    Classify {
        #[command(flatten)]
        common: CommonArgs,
        /// Spectrum file (csv or json) produced by `spectrum`
        #[arg(long)]
        spectrum: PathBuf,
        /// Classification tolerance; defaults to the documented
        /// shot-noise-aware formula at the given shots/partitions
        #[arg(long)]
        tau: Option<f64>,
        /// Shots the spectrum was sampled with (0 = noiseless)
        #[arg(long, default_value_t = 0)]
        shots: u64,
        /// Partitions the spectrum was extracted with
        #[arg(long)]
        partitions: Option<usize>,
    },
    /// Audit gate counts of the synthesized pipeline against the predicted costs
    Audit {
        #[command(flatten)]
        common: CommonArgs,
        #[arg(long, default_value_t = 1.0)]
        t: f64,
        #[arg(long, value_enum, default_value_t = PipelineArg::SwapTest)]
        mode: PipelineArg,
        #[arg(long, value_enum, default_value_t = SynthArg::Faithful)]
        synthesis: SynthArg,
    },
    /// simulate -> spectrum -> classify -> audit in one go
    RunAll {
        #[command(flatten)]
        common: CommonArgs,
        #[command(flatten)]
        sweep: SweepArgs,
    },
}

fn base_config(common: &CommonArgs) -> RunConfig {
    let mut config = RunConfig::new(common.d);
    config.omega = common.omega;
    config.out_dir = common.out_dir.clone();
    config.format = common.format;
    config
}

fn apply_sweep(config: &mut RunConfig, sweep: &SweepArgs) {
    if let Some(p) = sweep.partitions {
        config.partitions = p;
    }
    config.shots = sweep.shots;
    config.seed = sweep.seed;
    config.backend = sweep.backend;
    config.synthesis = sweep.synthesis.into();
    config.threads = sweep.threads;
    config.large = sweep.large;
    config.regime_iii = sweep.regime_iii;
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Angles { common, t, verify } => {
            let config = base_config(&common);
            let outcome = commands::cmd_angles(&config, t, verify)?;
            println!(
                "wrote {} non-zero angles to {}{}",
                outcome.entries,
                outcome.path.display(),
                match outcome.verified {
                    Some(true) => " (verified against brute-force transform)",
                    _ => "",
                }
            );
        }
        Command::Synth {
            common,
            t,
            mode,
            synthesis,
        } => {
            let mut config = base_config(&common);
            config.synthesis = synthesis.into();
            let (path, gates) = commands::cmd_synth(&config, t, mode.into())?;
            println!("wrote a {gates}-gate circuit to {}", path.display());
        }
        Command::Simulate { common, sweep } => {
            let mut config = base_config(&common);
            apply_sweep(&mut config, &sweep);
            warn_if_large(&config);
            let (series, path) = commands::cmd_simulate(&config)?;
            println!(
                "wrote {} purity points to {}",
                series.points().len(),
                path.display()
            );
        }
        Command::Spectrum {
            common,
            series,
            regime_iii,
        } => {
            let mut config = base_config(&common);
            config.regime_iii = regime_iii;
            let (spectrum, path) = commands::cmd_spectrum(&config, &series)?;
            println!(
                "wrote modes up to n = {} to {}",
                spectrum.nmax(),
                path.display()
            );
        }
        Command::Classify {
            common,
            spectrum,
            tau,
            shots,
            partitions,
        } => {
            let mut config = base_config(&common);
            config.shots = shots;
            if let Some(p) = partitions {
                config.partitions = p;
            }
            let outcome = commands::cmd_classify(&config, &spectrum, tau)?;
            let summary = &outcome.report.summary;
            println!(
                "classified {} decidable modes: {} agree, {} disagree, {} inconclusive (tau = {:e}); report at {}",
                summary.decidable,
                summary.agreements,
                summary.disagreements,
                summary.inconclusive,
                outcome.report.tau,
                outcome.path.display()
            );
            if !outcome.agrees() {
                return Err(CliError::Disagreement(format!(
                    "{} verdict(s) contradict the sieve",
                    summary.disagreements
                )));
            }
        }
        Command::Audit {
            common,
            t,
            mode,
            synthesis,
        } => {
            let mut config = base_config(&common);
            config.synthesis = synthesis.into();
            let (report, path) = commands::cmd_audit(&config, t, mode.into())?;
            println!(
                "stages prep/evolve/test = {}/{}/{} vs predicted {}/{}/{} per copy{}; report at {}",
                report.preparation,
                report.evolution,
                report
                    .test_stage
                    .map(|g| g.to_string())
                    .unwrap_or_else(|| "-".to_string()),
                report.predicted_g1,
                report.predicted_g2,
                report.predicted_g3,
                if report.pruned { " (pruned)" } else { "" },
                path.display()
            );
        }
        Command::RunAll { common, sweep } => {
            let mut config = base_config(&common);
            apply_sweep(&mut config, &sweep);
            warn_if_large(&config);
            let outcome = commands::cmd_run_all(&config)?;
            let summary = &outcome.classify.report.summary;
            println!(
                "pipeline complete: {} decidable modes, {} disagreements; outputs: {}, {}, {}, {}",
                summary.decidable,
                summary.disagreements,
                outcome.series_path.display(),
                outcome.spectrum_path.display(),
                outcome.classify.path.display(),
                outcome.audit_path.display()
            );
            if !outcome.classify.agrees() {
                return Err(CliError::Disagreement(format!(
                    "{} verdict(s) contradict the sieve",
                    summary.disagreements
                )));
            }
        }
    }
    Ok(())
}

fn warn_if_large(config: &RunConfig) {
    if config.d >= qprimes::config::LARGE_DIMENSION && config.large {
        eprintln!(
            "warning: d = {} sweeps {} time points at {} shots each; this will take a while",
            config.d,
            config.partitions + 1,
            config.shots
        );
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}
