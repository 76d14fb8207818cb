//! Classical simulation of Smoothed Particle Hydrodynamics (SPH) sums
//! evaluated through quantum-register inner products.
//!
//! A 1-D SPH approximation `f(r) ≈ Σ f_k Δx_k W(r - r_k, h)` is rewritten as
//! the inner product of two register states: `|a⟩`, the normalised vector of
//! weighted function samples, and `|W⟩`, the kernel vector scaled by `c·N`
//! with an imaginary closure term added to each amplitude so that every
//! entry has squared modulus `1/N`. The sum is recovered as
//! `c · N · ‖a‖ · Re⟨a|W⟩`.
//!
//! Modules, bottom-up:
//!
//! - [`discretization`]: particle positions and widths on a finite interval.
//! - [`kernels`]: Gaussian and Wendland kernels, their derivatives and the
//!   scaling constants `c = max |W|`.
//! - [`quantum_state`]: dense state vectors and operators.
//! - [`sph_encoding`]: building `|a⟩` and `|W⟩`, reconstruction and the
//!   classical direct-summation reference.
//! - [`inner_product_estimation`]: swap-test state, the rotation operator
//!   `G`, shot-sampled and phase-quantised estimators of `Re⟨x|y⟩`.
//! - [`harness`]: end-to-end experiments, RMS error and CSV output.

pub mod discretization;
pub mod error;
pub mod harness;
pub mod inner_product_estimation;
pub mod kernels;
pub mod quantum_state;
pub mod sph_encoding;

pub use error::{QsphError, Result};
