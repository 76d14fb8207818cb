//! Dense complex state vectors and operators.
//!
//! Basis ordering is big-endian: in an `m`-qubit register, index `k` is the
//! integer whose binary digits, read left to right, are the qubit values.
//! Kronecker products follow the same convention, so `|0⟩ ⊗ |1⟩ = |01⟩` has
//! its amplitude at index 1.

use std::fmt;

use num_complex::Complex64;

use crate::error::{QsphError, Result};

/// Acceptance tolerance on `|‖ψ‖ - 1|` at construction.
pub const NORM_TOLERANCE: f64 = 1e-12;
/// Norm defects up to this size are silently renormalised away.
pub const RENORMALIZE_TOLERANCE: f64 = 1e-8;

/// A unit vector in `ℂ^d`.
#[derive(Clone, PartialEq)]
pub struct StateVector {
    amplitudes: Vec<Complex64>,
}

impl StateVector {
    /// Wraps `amplitudes` as a state. Norm defects below
    /// [`RENORMALIZE_TOLERANCE`] are corrected; anything larger is rejected.
    pub fn new(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        if amplitudes.is_empty() {
            return Err(QsphError::EmptyVector);
        }
        let norm = euclidean_norm(&amplitudes);
        let defect = (norm - 1.0).abs();
        if defect.is_nan() || defect > RENORMALIZE_TOLERANCE {
            return Err(QsphError::NotNormalized { norm });
        }
        if defect > NORM_TOLERANCE {
            let inv = 1.0 / norm;
            amplitudes.iter_mut().for_each(|a| *a *= inv);
        }
        Ok(Self { amplitudes })
    }

    pub fn from_real(values: &[f64]) -> Result<Self> {
        Self::new(values.iter().map(|&v| Complex64::new(v, 0.0)).collect())
    }

    /// Computational basis state `|k⟩` in dimension `dim`.
    pub fn basis(dim: usize, k: usize) -> Result<Self> {
        if k >= dim {
            return Err(QsphError::LengthMismatch { expected: dim, found: k + 1 });
        }
        let mut amplitudes = vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[k] = Complex64::new(1.0, 0.0);
        Ok(Self { amplitudes })
    }

    /// Scales `raw` to unit length, returning the state and the original
    /// Euclidean norm, so that `raw = norm · state`.
    pub fn normalize(raw: &[Complex64]) -> Result<(Self, f64)> {
        if raw.is_empty() {
            return Err(QsphError::EmptyVector);
        }
        let norm = euclidean_norm(raw);
        if norm == 0.0 {
            return Err(QsphError::ZeroVector);
        }
        if !norm.is_finite() {
            return Err(QsphError::NotNormalized { norm });
        }
        let inv = 1.0 / norm;
        let amplitudes = raw.iter().map(|a| a * inv).collect();
        Ok((Self { amplitudes }, norm))
    }

    /// Caller guarantees unit norm.
    pub(crate) fn from_unit_amplitudes(amplitudes: Vec<Complex64>) -> Self {
        debug_assert!((euclidean_norm(&amplitudes) - 1.0).abs() <= RENORMALIZE_TOLERANCE);
        Self { amplitudes }
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    pub fn into_amplitudes(self) -> Vec<Complex64> {
        self.amplitudes
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    /// Number of qubits if the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<u32> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros())
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// Probability of measuring basis state `k`.
    pub fn probability(&self, k: usize) -> f64 {
        self.amplitudes[k].norm_sqr()
    }

    /// `⟨self|other⟩ = Σ conj(self_k) · other_k`.
    pub fn inner_product(&self, other: &StateVector) -> Result<Complex64> {
        check_len(self.dim(), other.dim())?;
        Ok(self
            .amplitudes
            .iter()
            .zip(&other.amplitudes)
            .map(|(x, y)| x.conj() * y)
            .sum())
    }
}

impl fmt::Debug for StateVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.amplitudes).finish()
    }
}

/// Kronecker product, `(A ⊗ B)[i·p + k, j·q + l] = A[i, j] · B[k, l]`.
pub trait Tensor {
    fn tensor(&self, other: &Self) -> Self;
}

impl Tensor for StateVector {
    fn tensor(&self, other: &Self) -> Self {
        let amplitudes = self
            .amplitudes
            .iter()
            .flat_map(|a| other.amplitudes.iter().map(move |b| a * b))
            .collect();
        Self { amplitudes }
    }
}

/// A dense complex matrix, stored row-major.
///
/// Most operators in this crate are square, but [`Operator::outer_product`]
/// of vectors with different lengths yields a rectangular one.
#[derive(Clone, PartialEq)]
pub struct Operator {
    rows: usize,
    cols: usize,
    entries: Vec<Complex64>,
}

impl Operator {
    pub fn from_entries(rows: usize, cols: usize, entries: Vec<Complex64>) -> Result<Self> {
        if entries.len() != rows * cols {
            return Err(QsphError::LengthMismatch {
                expected: rows * cols,
                found: entries.len(),
            });
        }
        Ok(Self { rows, cols, entries })
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let entries = (0..rows * cols).map(|n| f(n / cols, n % cols)).collect();
        Self { rows, cols, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Self::from_diagonal(&vec![Complex64::new(1.0, 0.0); dim])
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Self {
        let n = diag.len();
        let mut op = Self::zeros(n, n);
        for (i, d) in diag.iter().enumerate() {
            op.entries[i * n + i] = *d;
        }
        op
    }

    /// Pauli-Z: `Z|0⟩ = |0⟩`, `Z|1⟩ = -|1⟩`.
    pub fn pauli_z() -> Self {
        Self::from_diagonal(&[Complex64::new(1.0, 0.0), Complex64::new(-1.0, 0.0)])
    }

    /// `|v⟩⟨u|`, with entries `v_i · conj(u_j)`.
    pub fn outer_product(v: &StateVector, u: &StateVector) -> Self {
        let (a, b) = (v.amplitudes(), u.amplitudes());
        Self::from_fn(a.len(), b.len(), |i, j| a[i] * b[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries[i * self.cols + j]
    }

    pub fn entries(&self) -> &[Complex64] {
        &self.entries
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self.get(j, i).conj())
    }

    pub fn scale(&self, factor: Complex64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|e| e * factor).collect(),
        }
    }

    pub fn add(&self, other: &Operator) -> Result<Self> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &Operator) -> Result<Self> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &Operator, f: impl Fn(Complex64, Complex64) -> Complex64) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QsphError::LengthMismatch {
                expected: self.entries.len(),
                found: other.entries.len(),
            });
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| f(*a, *b)).collect(),
        })
    }

    pub fn matmul(&self, other: &Operator) -> Result<Self> {
        check_len(self.cols, other.rows)?;
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == Complex64::new(0.0, 0.0) {
                    continue;
                }
                let row = &other.entries[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.entries[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product on raw amplitudes.
    pub fn mul_vec(&self, v: &[Complex64]) -> Result<Vec<Complex64>> {
        check_len(self.cols, v.len())?;
        Ok(self
            .entries
            .chunks_exact(self.cols)
            .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
            .collect())
    }

    /// `Â|ψ⟩`. Fails if the result is not a unit vector, which cannot happen
    /// for a unitary operator.
    pub fn apply(&self, state: &StateVector) -> Result<StateVector> {
        StateVector::new(self.mul_vec(state.amplitudes())?)
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.rows.min(self.cols)).map(|i| self.get(i, i)).sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Operator) -> Result<f64> {
        Ok(self.sub(other)?.entries.iter().map(|e| e.norm()).fold(0.0, f64::max))
    }

    /// `U†U = I` entrywise within `tol`.
    pub fn is_unitary(&self, tol: f64) -> bool {
        self.is_square()
            && self
                .adjoint()
                .matmul(self)
                .and_then(|p| p.max_abs_diff(&Operator::identity(self.rows)))
                .is_ok_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.is_square() && self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d <= tol)
    }
}

impl Tensor for Operator {
    fn tensor(&self, other: &Self) -> Self {
        let (p, q) = (other.rows, other.cols);
        Self::from_fn(self.rows * p, self.cols * q, |r, c| {
            self.get(r / p, c / q) * other.get(r % p, c % q)
        })
    }
}

impl fmt::Debug for Operator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut list = f.debug_list();
        for row in self.entries.chunks_exact(self.cols.max(1)) {
            list.entry(&row);
        }
        list.finish()
    }
}

fn euclidean_norm(v: &[Complex64]) -> f64 {
    v.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
}

fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        return Err(QsphError::LengthMismatch { expected, found });
    }
    Ok(())
}
