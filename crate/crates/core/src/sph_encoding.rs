//! Encoding an SPH particle sum as a pair of register states.
//!
//! For an evaluation point `r` the sum `Σ f_k Δx_k W(r - r_k, h)` is split
//! into the weighted samples `a_k = f_k Δx_k` and the kernel values
//! `W_{r,k}`. `|a⟩ = a / ‖a‖` is real. `|W⟩` stores `Ŵ_k = W_{r,k} / (cN)`
//! in the real parts and `b_k = √(1/N - Ŵ_k²)` in the imaginary parts, so
//! every amplitude has squared modulus exactly `1/N`. Because `|a⟩` is
//! real, `Re⟨a|W⟩ = Σ a_k Ŵ_k / ‖a‖` and the sum is recovered as
//! `c · N · ‖a‖ · Re⟨a|W⟩`.
//!
//! `N` is always the register length: the particle count rounded up to a
//! power of two. Padded slots hold `0` in `|a⟩` and `i/√N` in `|W⟩`, which
//! keeps `|W⟩` normalised and contributes nothing to the real part.

use num_complex::Complex64;

use crate::discretization::{Domain, ParticleDiscretisation};
use crate::error::{QsphError, Result};
use crate::kernels::KernelSpec;
use crate::quantum_state::StateVector;

/// How function values are assigned to boundary particles outside `[a, b]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum BoundaryValues {
    /// Evaluate the function at the extended positions.
    #[default]
    Analytic,
    /// Boundary particles carry `f = 0`.
    Zero,
}

/// Function values `f_k = f(r_k)` at every particle of a discretisation.
#[derive(Debug, Clone, PartialEq)]
pub struct FunctionSamples(Vec<f64>);

impl FunctionSamples {
    pub fn from_values(disc: &ParticleDiscretisation, values: Vec<f64>) -> Result<Self> {
        if values.len() != disc.total_count() {
            return Err(QsphError::LengthMismatch {
                expected: disc.total_count(),
                found: values.len(),
            });
        }
        Ok(Self(values))
    }

    pub fn from_fn(disc: &ParticleDiscretisation, f: impl Fn(f64) -> f64, boundary: BoundaryValues) -> Self {
        let values = disc
            .positions()
            .iter()
            .enumerate()
            .map(|(k, &r)| match boundary {
                BoundaryValues::Zero if disc.is_boundary(k) => 0.0,
                _ => f(r),
            })
            .collect();
        Self(values)
    }

    pub fn values(&self) -> &[f64] {
        &self.0
    }

    pub fn scaled(&self, factor: f64) -> Self {
        Self(self.0.iter().map(|v| v * factor).collect())
    }

    fn check(&self, disc: &ParticleDiscretisation) -> Result<()> {
        if self.0.len() != disc.total_count() {
            return Err(QsphError::LengthMismatch {
                expected: disc.total_count(),
                found: self.0.len(),
            });
        }
        Ok(())
    }
}

/// Source of the classical scalar `‖a‖` used to undo the normalisation of `|a⟩`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormMode {
    /// Euclidean norm of the weighted sample vector.
    Exact,
    /// A precomputed estimate, typically from [`integral_norm_estimate`].
    IntegralApprox(f64),
}

/// Smallest power of two holding `particles` amplitudes.
pub fn register_len(particles: usize) -> usize {
    particles.max(1).next_power_of_two()
}

/// Builds `|a⟩` (zero-padded to the register length) and returns it with
/// the norm selected by `norm_mode`.
///
/// The state itself is always exactly normalised; in
/// [`NormMode::IntegralApprox`] only the returned scalar differs.
pub fn build_a(
    disc: &ParticleDiscretisation,
    samples: &FunctionSamples,
    norm_mode: NormMode,
) -> Result<(StateVector, f64)> {
    samples.check(disc)?;
    let len = register_len(disc.total_count());
    let mut raw: Vec<Complex64> = samples
        .values()
        .iter()
        .zip(disc.widths())
        .map(|(f, dx)| Complex64::new(f * dx, 0.0))
        .collect();
    raw.resize(len, Complex64::new(0.0, 0.0));
    let (state, exact_norm) = StateVector::normalize(&raw)?;
    let norm = match norm_mode {
        NormMode::Exact => exact_norm,
        NormMode::IntegralApprox(estimate) => estimate,
    };
    Ok((state, norm))
}

/// Estimates `‖a‖` for a uniform `num_particles` partition of `domain` as
/// `√(((b - a)/N) ∫_a^b |f|² dx)`, with the integral evaluated by the
/// composite trapezoid rule on `quadrature_points` nodes.
///
/// This is the leading term of `Σ f_k² Δx²` for `Δx = (b - a)/N`; it does
/// not include boundary particles.
pub fn integral_norm_estimate(
    domain: Domain,
    f: impl Fn(f64) -> f64,
    num_particles: usize,
    quadrature_points: usize,
) -> Result<f64> {
    if quadrature_points < 2 {
        return Err(QsphError::TooFewPoints(quadrature_points));
    }
    if num_particles == 0 {
        return Err(QsphError::NoParticles);
    }
    let nodes = domain.sample_points(quadrature_points)?;
    let step = domain.length() / (quadrature_points - 1) as f64;
    let sq = |x: f64| {
        let v = f(x);
        v * v
    };
    let ends = 0.5 * (sq(nodes[0]) + sq(nodes[quadrature_points - 1]));
    let inner: f64 = nodes[1..quadrature_points - 1].iter().map(|&x| sq(x)).sum();
    let integral = step * (ends + inner);
    Ok((domain.length() / num_particles as f64 * integral).sqrt())
}

/// Builds `|W⟩` for `eval_point` and returns it with the scaling constant `c`.
pub fn build_w(
    disc: &ParticleDiscretisation,
    spec: &KernelSpec,
    eval_point: f64,
    register_len: usize,
) -> Result<(StateVector, f64)> {
    if !register_len.is_power_of_two() {
        return Err(QsphError::NotPowerOfTwo(register_len));
    }
    if register_len < disc.total_count() {
        return Err(QsphError::RegisterTooSmall {
            register: register_len,
            required: disc.total_count(),
        });
    }
    let c = spec.scaling_constant();
    let n = register_len as f64;
    let inv_n = 1.0 / n;
    let mut amplitudes: Vec<Complex64> = disc
        .positions()
        .iter()
        .map(|&r_k| {
            let w_hat = spec.evaluate(eval_point - r_k) / (c * n);
            let slack = inv_n - w_hat * w_hat;
            // |Ŵ| ≤ 1/N, so slack ≥ 1/N - 1/N² ≥ 0 up to rounding
            debug_assert!(slack >= -1e-15, "closure term negative: {slack}");
            Complex64::new(w_hat, slack.max(0.0).sqrt())
        })
        .collect();
    amplitudes.resize(register_len, Complex64::new(0.0, inv_n.sqrt()));
    Ok((StateVector::from_unit_amplitudes(amplitudes), c))
}

/// `|a⟩`, `|W⟩` and the classical scalars that undo their normalisation.
#[derive(Debug, Clone)]
pub struct EncodedPair {
    state_a: StateVector,
    state_w: StateVector,
    norm_a: f64,
    c: f64,
    n_register: usize,
    padding: usize,
}

impl EncodedPair {
    /// Encodes the SPH sum of `samples` at `eval_point`.
    pub fn encode(
        disc: &ParticleDiscretisation,
        samples: &FunctionSamples,
        spec: &KernelSpec,
        eval_point: f64,
        norm_mode: NormMode,
    ) -> Result<Self> {
        let (state_a, norm_a) = build_a(disc, samples, norm_mode)?;
        let (state_w, c) = build_w(disc, spec, eval_point, state_a.dim())?;
        Self::from_parts(state_a, norm_a, state_w, c, disc.total_count())
    }

    /// Pairs an already-built `|a⟩` with a `|W⟩`. Lets callers reuse one
    /// `|a⟩` across many evaluation points.
    pub fn from_parts(
        state_a: StateVector,
        norm_a: f64,
        state_w: StateVector,
        c: f64,
        particles: usize,
    ) -> Result<Self> {
        if state_a.dim() != state_w.dim() {
            return Err(QsphError::LengthMismatch {
                expected: state_a.dim(),
                found: state_w.dim(),
            });
        }
        let n_register = state_a.dim();
        if particles > n_register {
            return Err(QsphError::RegisterTooSmall {
                register: n_register,
                required: particles,
            });
        }
        Ok(Self {
            state_a,
            state_w,
            norm_a,
            c,
            n_register,
            padding: n_register - particles,
        })
    }

    pub fn state_a(&self) -> &StateVector {
        &self.state_a
    }

    pub fn state_w(&self) -> &StateVector {
        &self.state_w
    }

    pub fn norm_a(&self) -> f64 {
        self.norm_a
    }

    pub fn c(&self) -> f64 {
        self.c
    }

    pub fn n_register(&self) -> usize {
        self.n_register
    }

    pub fn padding(&self) -> usize {
        self.padding
    }

    /// `c · N · ‖a‖`, the factor multiplying `Re⟨a|W⟩`.
    pub fn scale(&self) -> f64 {
        self.c * self.n_register as f64 * self.norm_a
    }

    /// The SPH sum recovered from the exact inner product.
    pub fn reconstruct(&self) -> f64 {
        self.reconstruct_from(self.overlap().re)
    }

    /// The SPH sum recovered from an externally estimated `Re⟨a|W⟩`.
    pub fn reconstruct_from(&self, re_overlap: f64) -> f64 {
        self.scale() * re_overlap
    }

    /// `⟨a|W⟩`.
    pub fn overlap(&self) -> Complex64 {
        self.state_a
            .inner_product(&self.state_w)
            .expect("dimensions checked at construction")
    }
}

/// `c · N · ‖a‖ · Re⟨a|W⟩` for `pair`.
pub fn reconstruct(pair: &EncodedPair) -> f64 {
    pair.reconstruct()
}

/// Direct summation `Σ_k f_k Δx_k W(eval_point - r_k, h)` over every
/// particle, boundary particles included.
pub fn classical_sph_sum(
    disc: &ParticleDiscretisation,
    samples: &FunctionSamples,
    spec: &KernelSpec,
    eval_point: f64,
) -> Result<f64> {
    samples.check(disc)?;
    Ok(samples
        .values()
        .iter()
        .zip(disc.widths())
        .zip(disc.positions())
        .map(|((f, dx), r_k)| f * dx * spec.evaluate(eval_point - r_k))
        .sum())
}
