//! Estimating `Re⟨x|y⟩` through the swap-test state
//!
//! ```text
//! |φ⟩ = ½ (|0⟩(|x⟩ + |y⟩) + |1⟩(|x⟩ - |y⟩)) = sin θ |0⟩|u⟩ + cos θ |1⟩|v⟩
//! ```
//!
//! with `sin² θ = (1 + Re⟨x|y⟩)/2`. Measuring the ancilla gives `|0⟩` with
//! probability `sin² θ`, and the operator `G` rotates the plane spanned by
//! `|0⟩|u⟩` and `|1⟩|v⟩` by `2θ`, so its eigenphases `±2θ` can be read out by
//! phase estimation.
//!
//! Three estimators are provided: exact (direct summation), shot sampling
//! of the ancilla, and an idealised phase-estimation quantiser that rounds
//! `θ` to the nearest point of the grid `kπ/2^n`. The quantiser models the
//! accuracy of phase estimation only; its failure probability `δ` and the
//! register size `n = O(log(1/(δε)))` needed to reach it are not simulated.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{QsphError, Result};
use crate::quantum_state::{Operator, StateVector};

/// `1 ∓ Re⟨x|y⟩` below this value makes `|v⟩` (resp. `|u⟩`) undefined.
pub const DEGENERACY_TOLERANCE: f64 = 1e-12;

/// Largest phase register accepted by [`estimate_phase`].
pub const MAX_PHASE_QUBITS: u32 = 52;

const SHOT_CHUNK: u64 = 1 << 14;

/// Which of `|u⟩`, `|v⟩` is undefined for a swap-test state.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Degeneracy {
    None,
    /// `|x⟩ = |y⟩` up to an imaginary overlap; `θ = π/2`, `|v⟩` undefined.
    VUndefined,
    /// `|x⟩ = -|y⟩`; `θ = 0`, `|u⟩` undefined.
    UUndefined,
}

#[derive(Debug, Clone)]
pub struct SwapTestState {
    phi: StateVector,
    theta: f64,
    d: usize,
    overlap_re: f64,
    degeneracy: Degeneracy,
}

impl SwapTestState {
    pub fn phi(&self) -> &StateVector {
        &self.phi
    }

    /// `θ ∈ [0, π/2]`.
    pub fn theta(&self) -> f64 {
        self.theta
    }

    /// Dimension of the component states `|x⟩`, `|y⟩`.
    pub fn d(&self) -> usize {
        self.d
    }

    /// `Re⟨x|y⟩`, clamped to `[-1, 1]`.
    pub fn overlap_re(&self) -> f64 {
        self.overlap_re
    }

    pub fn degeneracy(&self) -> Degeneracy {
        self.degeneracy
    }

    /// Ancilla `|0⟩` probability: the mass of the first half of `|φ⟩`.
    pub fn prob_zero(&self) -> f64 {
        block_mass(&self.phi.amplitudes()[..self.d])
    }

    /// Ancilla `|1⟩` probability.
    pub fn prob_one(&self) -> f64 {
        block_mass(&self.phi.amplitudes()[self.d..])
    }

    /// `|u⟩ = (|x⟩ + |y⟩)/‖|x⟩ + |y⟩‖`.
    pub fn u(&self) -> Option<StateVector> {
        if self.degeneracy == Degeneracy::UUndefined {
            return None;
        }
        StateVector::normalize(&self.phi.amplitudes()[..self.d]).ok().map(|(s, _)| s)
    }

    /// `|v⟩ = (|x⟩ - |y⟩)/‖|x⟩ - |y⟩‖`.
    pub fn v(&self) -> Option<StateVector> {
        if self.degeneracy == Degeneracy::VUndefined {
            return None;
        }
        StateVector::normalize(&self.phi.amplitudes()[self.d..]).ok().map(|(s, _)| s)
    }

    /// `G|ψ⟩` in `O(d)` without forming the matrix. See [`build_g_operator`].
    pub fn apply_g(&self, psi: &[Complex64]) -> Result<Vec<Complex64>> {
        if psi.len() != 2 * self.d {
            return Err(QsphError::LengthMismatch {
                expected: 2 * self.d,
                found: psi.len(),
            });
        }
        let z_psi: Vec<Complex64> = psi
            .iter()
            .enumerate()
            .map(|(i, p)| if i < self.d { *p } else { -p })
            .collect();
        let proj: Complex64 = self
            .phi
            .amplitudes()
            .iter()
            .zip(&z_psi)
            .map(|(f, z)| f.conj() * z)
            .sum();
        Ok(self
            .phi
            .amplitudes()
            .iter()
            .zip(&z_psi)
            .map(|(f, z)| z - 2.0 * proj * f)
            .collect())
    }
}

fn block_mass(block: &[Complex64]) -> f64 {
    block.iter().map(|a| a.norm_sqr()).sum()
}

/// Assembles `|φ⟩` and `θ` from two states of equal dimension.
///
/// Degenerate pairs (`Re⟨x|y⟩ = ±1`) still produce a valid state; the
/// undefined factor is flagged in [`SwapTestState::degeneracy`].
pub fn build_swap_state(x: &StateVector, y: &StateVector) -> Result<SwapTestState> {
    let overlap_re = x.inner_product(y)?.re.clamp(-1.0, 1.0);
    let d = x.dim();
    let (xa, ya) = (x.amplitudes(), y.amplitudes());
    let amplitudes: Vec<Complex64> = xa
        .iter()
        .zip(ya)
        .map(|(a, b)| 0.5 * (a + b))
        .chain(xa.iter().zip(ya).map(|(a, b)| 0.5 * (a - b)))
        .collect();
    let theta = theta_from_overlap(overlap_re);
    let degeneracy = if 1.0 - overlap_re <= DEGENERACY_TOLERANCE {
        Degeneracy::VUndefined
    } else if 1.0 + overlap_re <= DEGENERACY_TOLERANCE {
        Degeneracy::UUndefined
    } else {
        Degeneracy::None
    };
    Ok(SwapTestState {
        phi: StateVector::from_unit_amplitudes(amplitudes),
        theta,
        d,
        overlap_re,
        degeneracy,
    })
}

/// `θ ∈ [0, π/2]` with `sin θ = √((1+ρ)/2)`, `cos θ = √((1-ρ)/2)`.
pub fn theta_from_overlap(rho: f64) -> f64 {
    let rho = rho.clamp(-1.0, 1.0);
    ((0.5 * (1.0 + rho)).sqrt()).atan2((0.5 * (1.0 - rho)).sqrt())
}

/// The rotation operator `G = -(2|φ⟩⟨φ| - I)(Z ⊗ I)` as a dense
/// `2d × 2d` matrix.
///
/// In the basis `{|0⟩|u⟩, |1⟩|v⟩}` it is the rotation
/// `[[cos 2θ, sin 2θ], [-sin 2θ, cos 2θ]]` with eigenvalues `e^{±2iθ}`. The
/// leading minus sign is the usual amplitude-amplification convention;
/// without it the eigenvalues become `-e^{±2iθ}`.
///
/// Memory grows as `4d²`; use [`SwapTestState::apply_g`] for large `d`.
pub fn build_g_operator(s: &SwapTestState) -> Operator {
    let phi = s.phi.amplitudes();
    let d = s.d;
    Operator::from_fn(2 * d, 2 * d, |i, j| {
        let delta = if i == j { 1.0 } else { 0.0 };
        let z = if j < d { 1.0 } else { -1.0 };
        -(2.0 * phi[i] * phi[j].conj() - delta) * z
    })
}

/// Eigenvalues `e^{±2iθ}` of `G` and their eigenvectors
/// `|w±⟩ = (|0⟩|u⟩ ± i|1⟩|v⟩)/√2`.
#[derive(Debug, Clone)]
pub struct GEigenpairs {
    pub eigenvalues: [Complex64; 2],
    pub eigenvectors: [StateVector; 2],
    /// `max ‖G|w±⟩ - λ±|w±⟩‖∞`, computed on construction.
    pub residual: f64,
}

pub fn g_eigenpairs(s: &SwapTestState) -> Result<GEigenpairs> {
    let (u, v) = match (s.u(), s.v()) {
        (Some(u), Some(v)) if s.degeneracy == Degeneracy::None => (u, v),
        _ => return Err(QsphError::DegenerateSwapState { overlap: s.overlap_re }),
    };
    let i = Complex64::i();
    let r = std::f64::consts::FRAC_1_SQRT_2;
    let build = |sign: f64| -> StateVector {
        let amps = u
            .amplitudes()
            .iter()
            .map(|a| r * a)
            .chain(v.amplitudes().iter().map(|b| sign * r * i * b))
            .collect();
        StateVector::from_unit_amplitudes(amps)
    };
    let eigenvectors = [build(1.0), build(-1.0)];
    let eigenvalues = [
        Complex64::from_polar(1.0, 2.0 * s.theta),
        Complex64::from_polar(1.0, -2.0 * s.theta),
    ];
    let mut residual = 0.0f64;
    for (w, lambda) in eigenvectors.iter().zip(eigenvalues) {
        let gw = s.apply_g(w.amplitudes())?;
        for (a, b) in gw.iter().zip(w.amplitudes()) {
            residual = residual.max((a - lambda * b).norm());
        }
    }
    Ok(GEigenpairs {
        eigenvalues,
        eigenvectors,
        residual,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EstimationMethod {
    Exact,
    Sampled { shots: u64, seed: u64 },
    PhaseEstimated { n_pe: u32 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EstimationResult {
    pub method: EstimationMethod,
    /// Estimated `Re⟨x|y⟩`, clamped to `[-1, 1]`.
    pub estimate: f64,
    pub theta_estimate: Option<f64>,
    /// Bound on `|θ - theta_estimate|` in radians.
    pub error_bound: Option<f64>,
}

/// `Re⟨x|y⟩` by direct summation.
pub fn estimate_exact(x: &StateVector, y: &StateVector) -> Result<EstimationResult> {
    Ok(EstimationResult {
        method: EstimationMethod::Exact,
        estimate: x.inner_product(y)?.re.clamp(-1.0, 1.0),
        theta_estimate: None,
        error_bound: None,
    })
}

/// Simulates `shots` ancilla measurements of `|φ⟩` and returns
/// `2 · (zeros / shots) - 1`.
pub fn estimate_sampled(x: &StateVector, y: &StateVector, shots: u64, seed: u64) -> Result<EstimationResult> {
    estimate_sampled_on_stream(x, y, shots, seed, 0)
}

/// As [`estimate_sampled`], drawing from the independent random stream
/// `stream` of `seed`.
///
/// Shot `j` uses the uniform variate at position `j` of a ChaCha8 stream
/// keyed by `(seed, stream)`, so the result does not depend on how shots are
/// split across threads.
pub fn estimate_sampled_on_stream(
    x: &StateVector,
    y: &StateVector,
    shots: u64,
    seed: u64,
    stream: u64,
) -> Result<EstimationResult> {
    if shots == 0 {
        return Err(QsphError::config("shots", "must be at least 1"));
    }
    let swap = build_swap_state(x, y)?;
    let p0 = swap.prob_zero().clamp(0.0, 1.0);
    let zeros = count_zero_outcomes(p0, shots, seed, stream);
    Ok(EstimationResult {
        method: EstimationMethod::Sampled { shots, seed },
        estimate: (2.0 * zeros as f64 / shots as f64 - 1.0).clamp(-1.0, 1.0),
        theta_estimate: None,
        error_bound: None,
    })
}

fn count_zero_outcomes(p0: f64, shots: u64, seed: u64, stream: u64) -> u64 {
    let chunks = shots.div_ceil(SHOT_CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|chunk| {
            let start = chunk * SHOT_CHUNK;
            let end = (start + SHOT_CHUNK).min(shots);
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(stream);
            // one f64 consumes one u64, i.e. two 32-bit words
            rng.set_word_pos(2 * start as u128);
            (start..end).filter(|_| rng.random::<f64>() < p0).count() as u64
        })
        .sum()
}

/// Idealised phase estimation with an `n_pe`-qubit register: `θ` is rounded
/// to the nearest grid point `kπ/2^n_pe` (ties to the smaller `k`), which
/// guarantees `|θ - kπ/2^n_pe| ≤ π/2^(n_pe+1)`.
pub fn estimate_phase(x: &StateVector, y: &StateVector, n_pe: u32) -> Result<EstimationResult> {
    if n_pe == 0 || n_pe > MAX_PHASE_QUBITS {
        return Err(QsphError::config(
            "pe_qubits",
            format!("must be between 1 and {MAX_PHASE_QUBITS}, got {n_pe}"),
        ));
    }
    let swap = build_swap_state(x, y)?;
    let theta_estimate = quantize_theta(swap.theta, n_pe);
    let s = theta_estimate.sin();
    Ok(EstimationResult {
        method: EstimationMethod::PhaseEstimated { n_pe },
        estimate: (2.0 * s * s - 1.0).clamp(-1.0, 1.0),
        theta_estimate: Some(theta_estimate),
        error_bound: Some(phase_error_bound(n_pe)),
    })
}

/// Nearest grid point `kπ/2^n`, `k ∈ {0, …, 2^n - 1}`.
pub fn quantize_theta(theta: f64, n: u32) -> f64 {
    let grid = (1u64 << n) as f64;
    let t = theta.clamp(0.0, FRAC_PI_2) * grid / PI;
    let k = (t - 0.5).ceil().clamp(0.0, grid - 1.0);
    k * PI / grid
}

/// `π / 2^(n+1)`, half the grid spacing.
pub fn phase_error_bound(n: u32) -> f64 {
    PI / (1u64 << (n + 1)) as f64
}
