//! End-to-end approximation experiments on the test function
//! `f(x) = 1/(1 + 25x²)` and its first two derivatives.
//!
//! For an `m`-qubit configuration the interval is split into `2^m` particles
//! (plus boundary particles), the smoothing length defaults to `h = 4/2^m`,
//! and the approximation is queried at `n` evaluation points spread evenly
//! over the domain. Derivatives are approximated by sampling `f` itself and
//! swapping in the corresponding kernel derivative.

mod output;

pub use output::{read_rows_csv, read_sweep_csv, write_rows_csv, write_sweep_csv, ROWS_HEADER, SWEEP_HEADER};

use rayon::prelude::*;

use crate::discretization::{Domain, ParticleDiscretisation};
use crate::error::{QsphError, Result};
use crate::inner_product_estimation::{
    estimate_exact, estimate_phase, estimate_sampled_on_stream, MAX_PHASE_QUBITS,
};
use crate::kernels::{DerivativeOrder, KernelFamily, KernelSpec};
use crate::sph_encoding::{build_a, build_w, integral_norm_estimate, BoundaryValues, EncodedPair, FunctionSamples, NormMode};

/// Largest register simulated with dense state vectors.
pub const MAX_QUBITS: u32 = 16;

/// Trapezoid nodes used for the integral norm estimate.
pub const NORM_QUADRATURE_POINTS: usize = 20_001;

/// `f(x) = 1/(1 + 25x²)` or its first or second derivative.
pub fn target_function(x: f64, order: DerivativeOrder) -> f64 {
    let d = 1.0 + 25.0 * x * x;
    match order {
        DerivativeOrder::Value => 1.0 / d,
        DerivativeOrder::First => -50.0 * x / (d * d),
        DerivativeOrder::Second => 50.0 * (75.0 * x * x - 1.0) / (d * d * d),
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SmoothingRule {
    /// `h = 4 / 2^m`.
    QubitScaled,
    Fixed(f64),
}

impl SmoothingRule {
    pub fn smoothing_length(&self, qubits: u32) -> f64 {
        match *self {
            SmoothingRule::QubitScaled => 4.0 / (1u64 << qubits) as f64,
            SmoothingRule::Fixed(h) => h,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NormChoice {
    Exact,
    Integral,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Estimator {
    Exact,
    Sampled { shots: u64, seed: u64 },
    PhaseEstimated { n_pe: u32 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub kernel: KernelFamily,
    pub derivative_order: DerivativeOrder,
    pub qubits: u32,
    pub domain: Domain,
    pub eval_points: usize,
    pub boundary_particles: usize,
    pub boundary_values: BoundaryValues,
    pub smoothing: SmoothingRule,
    pub norm: NormChoice,
    pub estimator: Estimator,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            kernel: KernelFamily::Gaussian,
            derivative_order: DerivativeOrder::Value,
            qubits: 8,
            domain: Domain::new(-1.0, 1.0).expect("valid default domain"),
            eval_points: 300,
            boundary_particles: 4,
            boundary_values: BoundaryValues::Analytic,
            smoothing: SmoothingRule::QubitScaled,
            norm: NormChoice::Exact,
            estimator: Estimator::Exact,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        if !(2..=MAX_QUBITS).contains(&self.qubits) {
            return Err(QsphError::config(
                "qubits",
                format!("must be between 2 and {MAX_QUBITS}, got {}", self.qubits),
            ));
        }
        if self.eval_points < 2 {
            return Err(QsphError::config("points", "need at least 2 evaluation points"));
        }
        let h = self.smoothing_length();
        if !(h.is_finite() && h > 0.0) {
            return Err(QsphError::config("h", format!("must be positive, got {h}")));
        }
        match self.estimator {
            Estimator::Sampled { shots: 0, .. } => {
                return Err(QsphError::config("shots", "must be at least 1"));
            }
            Estimator::PhaseEstimated { n_pe } if n_pe == 0 || n_pe > MAX_PHASE_QUBITS => {
                return Err(QsphError::config(
                    "pe_qubits",
                    format!("must be between 1 and {MAX_PHASE_QUBITS}, got {n_pe}"),
                ));
            }
            _ => {}
        }
        Ok(())
    }

    pub fn smoothing_length(&self) -> f64 {
        self.smoothing.smoothing_length(self.qubits)
    }

    pub fn num_particles(&self) -> usize {
        1usize << self.qubits
    }

    pub fn kernel_spec(&self) -> Result<KernelSpec> {
        KernelSpec::new(self.kernel, self.derivative_order, self.smoothing_length())
    }

    pub fn discretisation(&self) -> Result<ParticleDiscretisation> {
        ParticleDiscretisation::uniform(self.domain, self.num_particles(), self.boundary_particles)
    }
}

/// One evaluation point of an experiment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExperimentRow {
    pub x: f64,
    pub f_exact: f64,
    pub f_approx: f64,
    pub abs_error: f64,
}

impl ExperimentRow {
    pub fn new(x: f64, f_exact: f64, f_approx: f64) -> Self {
        Self {
            x,
            f_exact,
            f_approx,
            abs_error: (f_exact - f_approx).abs(),
        }
    }
}

/// Encodes, estimates and reconstructs the approximation at every
/// evaluation point. Rows come back in ascending `x`.
pub fn run_experiment(config: &ExperimentConfig) -> Result<Vec<ExperimentRow>> {
    config.validate()?;
    let disc = config.discretisation()?;
    let spec = config.kernel_spec()?;
    let samples = FunctionSamples::from_fn(
        &disc,
        |x| target_function(x, DerivativeOrder::Value),
        config.boundary_values,
    );
    let norm_mode = match config.norm {
        NormChoice::Exact => NormMode::Exact,
        NormChoice::Integral => NormMode::IntegralApprox(integral_norm_estimate(
            config.domain,
            |x| target_function(x, DerivativeOrder::Value),
            config.num_particles(),
            NORM_QUADRATURE_POINTS,
        )?),
    };
    let (state_a, norm_a) = build_a(&disc, &samples, norm_mode)?;
    let points = config.domain.sample_points(config.eval_points)?;

    let rows = points
        .par_iter()
        .enumerate()
        .map(|(index, &x)| {
            let (state_w, c) = build_w(&disc, &spec, x, state_a.dim())?;
            let pair = EncodedPair::from_parts(state_a.clone(), norm_a, state_w, c, disc.total_count())?;
            let overlap = match config.estimator {
                Estimator::Exact => estimate_exact(pair.state_a(), pair.state_w())?,
                Estimator::Sampled { shots, seed } => {
                    estimate_sampled_on_stream(pair.state_a(), pair.state_w(), shots, seed, index as u64)?
                }
                Estimator::PhaseEstimated { n_pe } => estimate_phase(pair.state_a(), pair.state_w(), n_pe)?,
            };
            let f_approx = pair.reconstruct_from(overlap.estimate);
            if !f_approx.is_finite() {
                return Err(QsphError::NonFinite { x });
            }
            Ok(ExperimentRow::new(x, target_function(x, config.derivative_order), f_approx))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(rows)
}

/// `√(Σ (f_exact - f_approx)² / n)`.
pub fn rms_error(rows: &[ExperimentRow]) -> Result<f64> {
    if rows.is_empty() {
        return Err(QsphError::EmptyRows);
    }
    let sum_sq: f64 = rows.iter().map(|r| (r.f_exact - r.f_approx).powi(2)).sum();
    Ok((sum_sq / rows.len() as f64).sqrt())
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepRow {
    pub m: u32,
    pub kernel: KernelFamily,
    pub order: DerivativeOrder,
    pub rms: f64,
}

/// RMS error of `base` re-run for each register size in `m_values`.
pub fn run_convergence_sweep(base: &ExperimentConfig, m_values: &[u32]) -> Result<Vec<SweepRow>> {
    if m_values.is_empty() {
        return Err(QsphError::config("m", "sweep needs at least one register size"));
    }
    if m_values.windows(2).any(|w| w[1] <= w[0]) {
        return Err(QsphError::config("m", "register sizes must be strictly ascending"));
    }
    m_values
        .iter()
        .map(|&m| {
            let config = ExperimentConfig { qubits: m, ..base.clone() };
            let rows = run_experiment(&config)?;
            Ok(SweepRow {
                m,
                kernel: base.kernel,
                order: base.derivative_order,
                rms: rms_error(&rows)?,
            })
        })
        .collect()
}

/// Per-source RMS breakdown of the approximation error.
///
/// With `f_base` the approximation using the exact norm and exact inner
/// product, `f_norm` the one using the configured norm and the exact inner
/// product, and `f_full` the fully configured run, each row's error splits
/// as `(f_base - f) + (f_norm - f_base) + (f_full - f_norm)`. The last term
/// is shot noise for [`Estimator::Sampled`] and quantisation for
/// [`Estimator::PhaseEstimated`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ErrorDecomposition {
    pub discretisation: f64,
    pub norm_approximation: f64,
    pub shot_noise: f64,
    pub quantization: f64,
    pub total: f64,
}

pub fn decompose_errors(config: &ExperimentConfig) -> Result<ErrorDecomposition> {
    let base_cfg = ExperimentConfig {
        norm: NormChoice::Exact,
        estimator: Estimator::Exact,
        ..config.clone()
    };
    let norm_cfg = ExperimentConfig {
        estimator: Estimator::Exact,
        ..config.clone()
    };
    let base = run_experiment(&base_cfg)?;
    let with_norm = run_experiment(&norm_cfg)?;
    let full = run_experiment(config)?;

    let rms_of = |diffs: &mut dyn Iterator<Item = f64>| -> f64 {
        let (sum, n) = diffs.fold((0.0, 0usize), |(s, n), d| (s + d * d, n + 1));
        (sum / n as f64).sqrt()
    };
    let discretisation = rms_of(&mut base.iter().map(|r| r.f_approx - r.f_exact));
    let norm_approximation = rms_of(&mut base.iter().zip(&with_norm).map(|(b, n)| n.f_approx - b.f_approx));
    let estimation = rms_of(&mut with_norm.iter().zip(&full).map(|(n, f)| f.f_approx - n.f_approx));
    let (shot_noise, quantization) = match config.estimator {
        Estimator::Exact => (0.0, 0.0),
        Estimator::Sampled { .. } => (estimation, 0.0),
        Estimator::PhaseEstimated { .. } => (0.0, estimation),
    };
    Ok(ErrorDecomposition {
        discretisation,
        norm_approximation,
        shot_noise,
        quantization,
        total: rms_error(&full)?,
    })
}
