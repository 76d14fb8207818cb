//! `qsph`: run the Runge-function SPH experiments and write CSV.
//!
//! Exit codes: 0 success, 2 configuration error, 3 non-finite result,
//! 1 anything else.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use qsph_core::discretization::Domain;
use qsph_core::harness::{
    decompose_errors, rms_error, run_convergence_sweep, run_experiment, write_rows_csv, write_sweep_csv,
    Estimator, ExperimentConfig, NormChoice, SmoothingRule,
};
use qsph_core::kernels::{DerivativeOrder, KernelFamily};
use qsph_core::sph_encoding::BoundaryValues;
use qsph_core::QsphError;
use serde::Deserialize;

const DEFAULT_SHOTS: u64 = 10_000;
const DEFAULT_PE_QUBITS: u32 = 10;
const DEFAULT_M_MIN: u32 = 4;
const DEFAULT_M_MAX: u32 = 8;

#[derive(Parser, Debug)]
#[command(name = "qsph", version, about = "SPH function approximation via quantum-register inner products")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Approximate the target function at evenly spaced points.
    Run(Common),
    /// RMS error over a range of register sizes.
    Sweep {
        #[arg(long)]
        m_min: Option<u32>,
        #[arg(long)]
        m_max: Option<u32>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug, Default)]
struct Common {
    /// TOML file with the same keys as the long flags (underscores for dashes).
    #[arg(long, value_name = "FILE")]
    config: Option<PathBuf>,
    #[arg(long, value_enum)]
    kernel: Option<Kernel>,
    #[arg(long, value_parser = clap::value_parser!(u8).range(0..=2))]
    order: Option<u8>,
    /// Register qubits m; the domain holds 2^m particles.
    #[arg(long)]
    qubits: Option<u32>,
    /// Number of evaluation points.
    #[arg(long)]
    points: Option<usize>,
    #[arg(long, num_args = 2, value_names = ["A", "B"], allow_negative_numbers = true)]
    domain: Option<Vec<f64>>,
    /// Boundary particles past each end of the domain.
    #[arg(long)]
    boundary_particles: Option<usize>,
    /// Function values carried by boundary particles.
    #[arg(long, value_enum)]
    boundary: Option<Boundary>,
    /// Fixed smoothing length; defaults to 4 / 2^m.
    #[arg(long)]
    h: Option<f64>,
    #[arg(long, value_enum)]
    norm: Option<Norm>,
    #[arg(long, value_enum)]
    estimator: Option<EstimatorKind>,
    #[arg(long)]
    shots: Option<u64>,
    #[arg(long)]
    pe_qubits: Option<u32>,
    #[arg(long)]
    seed: Option<u64>,
    /// Output CSV path; standard output when absent.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Kernel {
    Gaussian,
    Wendland,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Boundary {
    Analytic,
    Zero,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum Norm {
    Exact,
    Integral,
}

#[derive(ValueEnum, Deserialize, Clone, Copy, Debug, PartialEq, Eq)]
#[serde(rename_all = "lowercase")]
enum EstimatorKind {
    Exact,
    Sampled,
    Phase,
}

#[derive(Deserialize, Debug, Default)]
#[serde(deny_unknown_fields)]
struct FileConfig {
    kernel: Option<Kernel>,
    order: Option<u8>,
    qubits: Option<u32>,
    points: Option<usize>,
    domain: Option<[f64; 2]>,
    boundary_particles: Option<usize>,
    boundary: Option<Boundary>,
    h: Option<f64>,
    norm: Option<Norm>,
    estimator: Option<EstimatorKind>,
    shots: Option<u64>,
    pe_qubits: Option<u32>,
    seed: Option<u64>,
    out: Option<PathBuf>,
    m_min: Option<u32>,
    m_max: Option<u32>,
}

/// Errors raised while assembling the configuration.
#[derive(Debug)]
struct ConfigError(String);

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn config_err(msg: impl Into<String>) -> anyhow::Error {
    ConfigError(msg.into()).into()
}

fn load_file(path: &Path) -> anyhow::Result<FileConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read config {}: {e}", path.display())))?;
    toml::from_str(&text).map_err(|e| config_err(format!("invalid config {}: {e}", path.display())))
}

struct Resolved {
    experiment: ExperimentConfig,
    out: Option<PathBuf>,
    m_min: u32,
    m_max: u32,
}

fn resolve(common: Common, m_min: Option<u32>, m_max: Option<u32>) -> anyhow::Result<Resolved> {
    let file = match &common.config {
        Some(path) => load_file(path)?,
        None => FileConfig::default(),
    };
    let defaults = ExperimentConfig::default();

    let kernel = match common.kernel.or(file.kernel) {
        Some(Kernel::Gaussian) => KernelFamily::Gaussian,
        Some(Kernel::Wendland) => KernelFamily::Wendland,
        None => defaults.kernel,
    };
    let derivative_order = match common.order.or(file.order) {
        Some(o) => DerivativeOrder::try_from(o).map_err(|e| config_err(e.to_string()))?,
        None => defaults.derivative_order,
    };
    let domain = match common.domain.as_deref().or(file.domain.as_ref().map(|d| &d[..])) {
        Some(&[a, b]) => Domain::new(a, b).map_err(|e| config_err(e.to_string()))?,
        Some(other) => return Err(config_err(format!("domain needs two values, got {}", other.len()))),
        None => defaults.domain,
    };
    let boundary_values = match common.boundary.or(file.boundary) {
        Some(Boundary::Analytic) => BoundaryValues::Analytic,
        Some(Boundary::Zero) => BoundaryValues::Zero,
        None => defaults.boundary_values,
    };
    let smoothing = match common.h.or(file.h) {
        Some(h) => SmoothingRule::Fixed(h),
        None => defaults.smoothing,
    };
    let norm = match common.norm.or(file.norm) {
        Some(Norm::Exact) => NormChoice::Exact,
        Some(Norm::Integral) => NormChoice::Integral,
        None => defaults.norm,
    };
    let estimator = match common.estimator.or(file.estimator) {
        Some(EstimatorKind::Exact) | None => Estimator::Exact,
        Some(EstimatorKind::Sampled) => Estimator::Sampled {
            shots: common.shots.or(file.shots).unwrap_or(DEFAULT_SHOTS),
            seed: common.seed.or(file.seed).unwrap_or(0),
        },
        Some(EstimatorKind::Phase) => Estimator::PhaseEstimated {
            n_pe: common.pe_qubits.or(file.pe_qubits).unwrap_or(DEFAULT_PE_QUBITS),
        },
    };

    let experiment = ExperimentConfig {
        kernel,
        derivative_order,
        qubits: common.qubits.or(file.qubits).unwrap_or(defaults.qubits),
        domain,
        eval_points: common.points.or(file.points).unwrap_or(defaults.eval_points),
        boundary_particles: common
            .boundary_particles
            .or(file.boundary_particles)
            .unwrap_or(defaults.boundary_particles),
        boundary_values,
        smoothing,
        norm,
        estimator,
    };
    experiment.validate().map_err(|e| config_err(e.to_string()))?;

    Ok(Resolved {
        experiment,
        out: common.out.or(file.out),
        m_min: m_min.or(file.m_min).unwrap_or(DEFAULT_M_MIN),
        m_max: m_max.or(file.m_max).unwrap_or(DEFAULT_M_MAX),
    })
}

fn configure_threads() -> anyhow::Result<()> {
    let Ok(value) = std::env::var("QSPH_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| config_err(format!("QSPH_THREADS must be a positive integer, got `{value}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .context("building thread pool")
}

fn open_output(out: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => Box::new(BufWriter::new(
            File::create(path).with_context(|| format!("creating {}", path.display()))?,
        )),
        None => Box::new(io::stdout().lock()),
    })
}

fn run(common: Common) -> anyhow::Result<()> {
    let resolved = resolve(common, None, None)?;
    let config = &resolved.experiment;
    let rows = run_experiment(config)?;
    write_rows_csv(open_output(resolved.out.as_deref())?, &rows)?;
    eprintln!("rms error: {:.6e}", rms_error(&rows)?);
    if config.norm != NormChoice::Exact || config.estimator != Estimator::Exact {
        let d = decompose_errors(config)?;
        eprintln!("error decomposition (rms):");
        eprintln!("  discretisation      {:.6e}", d.discretisation);
        eprintln!("  norm approximation  {:.6e}", d.norm_approximation);
        eprintln!("  shot noise          {:.6e}", d.shot_noise);
        eprintln!("  quantisation        {:.6e}", d.quantization);
        eprintln!("  total               {:.6e}", d.total);
    }
    Ok(())
}

fn sweep(common: Common, m_min: Option<u32>, m_max: Option<u32>) -> anyhow::Result<()> {
    let resolved = resolve(common, m_min, m_max)?;
    if resolved.m_min > resolved.m_max {
        return Err(config_err(format!(
            "m-min ({}) exceeds m-max ({})",
            resolved.m_min, resolved.m_max
        )));
    }
    let m_values: Vec<u32> = (resolved.m_min..=resolved.m_max).collect();
    for &m in &m_values {
        ExperimentConfig { qubits: m, ..resolved.experiment.clone() }
            .validate()
            .map_err(|e| config_err(e.to_string()))?;
    }
    let rows = run_convergence_sweep(&resolved.experiment, &m_values)?;
    write_sweep_csv(open_output(resolved.out.as_deref())?, &rows)?;
    Ok(())
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if err.downcast_ref::<ConfigError>().is_some() {
        return 2;
    }
    match err.downcast_ref::<QsphError>() {
        Some(QsphError::NonFinite { .. }) => 3,
        Some(QsphError::Config { .. } | QsphError::InvalidDomain { .. } | QsphError::InvalidKernel(_)) => 2,
        _ => 1,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = configure_threads().and_then(|()| match cli.command {
        Command::Run(common) => run(common),
        Command::Sweep { m_min, m_max, common } => sweep(common, m_min, m_max),
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
