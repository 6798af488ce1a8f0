// Copyright 2026 the qwalk developers
//
// Licensed under the Apache License, Version 2.0 (the "License"); you may not use
// this file except in compliance with the License. You may obtain a copy of the
// License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software distributed
// under the License is distributed on an "AS IS" BASIS, WITHOUT WARRANTIES OR
// CONDITIONS OF ANY KIND, either express or implied. See the License for the
// specific language governing permissions and limitations under the License.

//! Dense complex state vectors and square matrices.
//!
//! Dimensions are powers of two. Bit `q` of a basis index is qubit `q`, so
//! qubit 0 is the least significant bit and a ket label
//! `|q_{n-1} ... q_1 q_0>` reads left to right from the most significant bit.
//! Matrices are row-major; `kron(a, b)` places `a` on the high bits.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::MAX_KRON_DIM;

/// Complex amplitude type used throughout the crate.
pub type Complex = Complex64;

/// Widest register a bare state vector may span (16M amplitudes).
pub const MAX_STATE_QUBITS: usize = 24;

/// A normalized (unless explicitly noted) pure state on `num_qubits` qubits.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    num_qubits: usize,
    amps: Vec<Complex>,
}

impl StateVector {
    /// The all-zeros computational basis state `|0...0>`.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        Self::basis_state(num_qubits, 0)
    }

    /// The computational basis state with the given index.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if index >= dim {
            return Err(Error::Invalid(format!(
                "basis index {index} out of range for {num_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex::new(0.0, 0.0); dim];
        amps[index] = Complex::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// Wraps raw amplitudes; the length must be `2^num_qubits`.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<Complex>) -> Result<Self> {
        check_width(num_qubits)?;
        let dim = 1usize << num_qubits;
        if amps.len() != dim {
            return Err(Error::DimensionMismatch {
                expected: dim,
                got: amps.len(),
            });
        }
        Ok(Self { num_qubits, amps })
    }

    #[must_use]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    #[must_use]
    pub fn amps(&self) -> &[Complex] {
        &self.amps
    }

    #[must_use]
    pub fn into_amps(self) -> Vec<Complex> {
        self.amps
    }

    pub(crate) fn amps_mut(&mut self) -> &mut [Complex] {
        &mut self.amps
    }

    /// Euclidean norm of the amplitude vector.
    #[must_use]
    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Inner product `<self|other>` (conjugate-linear in `self`).
    pub fn inner(&self, other: &Self) -> Result<Complex> {
        if self.dim() != other.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                got: other.dim(),
            });
        }
        Ok(self
            .amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    /// Fidelity `|<self|other>|^2` between two pure states.
    pub fn overlap_prob(&self, other: &Self) -> Result<f64> {
        Ok(self.inner(other)?.norm_sqr())
    }

    /// Rescales the amplitudes to unit norm. No-op on the zero vector.
    pub fn renormalize(&mut self) {
        let n = self.norm();
        if n > 0.0 {
            let inv = 1.0 / n;
            for a in &mut self.amps {
                *a *= inv;
            }
        }
    }

    /// Outcome probabilities `|amp|^2` per basis index.
    #[must_use]
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Formats a basis index as a ket bitstring, most significant qubit first.
#[must_use]
pub fn basis_label(num_qubits: usize, index: usize) -> String {
    format!("{index:0num_qubits$b}")
}

fn check_width(num_qubits: usize) -> Result<()> {
    if num_qubits == 0 || num_qubits > MAX_STATE_QUBITS {
        return Err(Error::Capacity {
            what: "state vector",
            required: 1usize.checked_shl(num_qubits as u32).unwrap_or(usize::MAX),
            cap: 1 << MAX_STATE_QUBITS,
        });
    }
    Ok(())
}

/// A dense row-major complex matrix of shape `dim x dim`.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMatrix {
    dim: usize,
    data: Vec<Complex>,
}

impl SquareMatrix {
    #[must_use]
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![Complex::new(0.0, 0.0); dim * dim],
        }
    }

    #[must_use]
    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m.data[i * dim + i] = Complex::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from row slices; all rows must have length `rows.len()`.
    pub fn from_rows(rows: &[Vec<Complex>]) -> Result<Self> {
        let dim = rows.len();
        let mut data = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    expected: dim,
                    got: row.len(),
                });
            }
            data.extend_from_slice(row);
        }
        Ok(Self { dim, data })
    }

    #[must_use]
    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    #[must_use]
    pub fn get(&self, row: usize, col: usize) -> Complex {
        self.data[row * self.dim + col]
    }

    #[inline]
    pub fn set(&mut self, row: usize, col: usize, value: Complex) {
        self.data[row * self.dim + col] = value;
    }

    #[must_use]
    pub fn data(&self) -> &[Complex] {
        &self.data
    }

    /// Matrix product `self * rhs`.
    pub fn mul(&self, rhs: &Self) -> Result<Self> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * rhs.data[k * n + j];
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    #[must_use]
    pub fn dagger(&self) -> Self {
        let n = self.dim;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j].conj();
            }
        }
        out
    }

    /// Largest entrywise absolute difference against `other`.
    pub fn max_abs_diff(&self, other: &Self) -> Result<f64> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: other.dim,
            });
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }
}

/// Kronecker product with `a` on the high bits: `(a ⊗ b)`.
pub fn kron(a: &SquareMatrix, b: &SquareMatrix) -> Result<SquareMatrix> {
    if a.dim > MAX_KRON_DIM || b.dim > MAX_KRON_DIM || a.dim.saturating_mul(b.dim) > MAX_KRON_DIM {
        return Err(Error::Capacity {
            what: "kron product",
            required: a.dim.saturating_mul(b.dim),
            cap: MAX_KRON_DIM,
        });
    }
    let (ad, bd) = (a.dim, b.dim);
    let dim = ad * bd;
    let mut out = SquareMatrix::zeros(dim);
    for i in 0..ad {
        for j in 0..ad {
            let aij = a.get(i, j);
            if aij.norm_sqr() == 0.0 {
                continue;
            }
            for k in 0..bd {
                for l in 0..bd {
                    out.set(i * bd + k, j * bd + l, aij * b.get(k, l));
                }
            }
        }
    }
    Ok(out)
}

/// Dense matrix-vector product `u * state`.
pub fn mat_apply(u: &SquareMatrix, state: &StateVector) -> Result<StateVector> {
    if u.dim != state.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.dim,
            got: state.dim(),
        });
    }
    let n = u.dim;
    let amps = state.amps();
    let mut out = vec![Complex::new(0.0, 0.0); n];
    for (i, o) in out.iter_mut().enumerate() {
        let row = &u.data[i * n..(i + 1) * n];
        *o = row.iter().zip(amps).map(|(m, a)| m * a).sum();
    }
    StateVector::from_amplitudes(state.num_qubits(), out)
}

/// Checks `u† u = I` to the given entrywise tolerance.
#[must_use]
pub fn is_unitary(u: &SquareMatrix, tol: f64) -> bool {
    let n = u.dim;
    // u† u entry (i, j) = sum_k conj(u[k,i]) u[k,j]; computed column-wise to
    // avoid materializing the dagger.
    for i in 0..n {
        for j in 0..n {
            let mut s = Complex::new(0.0, 0.0);
            for k in 0..n {
                s += u.data[k * n + i].conj() * u.data[k * n + j];
            }
            let expect = if i == j { 1.0 } else { 0.0 };
            if (s - expect).norm() > tol {
                return false;
            }
        }
    }
    true
}

/// Frobenius distance between `a` and `b` minimized over a global phase on
/// `b`: `min_phi || a - e^{i phi} b ||_F`.
///
/// The minimizing phase is `phi* = arg tr(b† a)`; when the trace vanishes the
/// phase is irrelevant and 0 is used.
pub fn dist_up_to_global_phase(a: &SquareMatrix, b: &SquareMatrix) -> Result<f64> {
    if a.dim != b.dim {
        return Err(Error::DimensionMismatch {
            expected: a.dim,
            got: b.dim,
        });
    }
    let tr: Complex = a.data.iter().zip(&b.data).map(|(x, y)| y.conj() * x).sum();
    let phase = Complex::from_polar(1.0, tr.arg());
    let d2: f64 = a
        .data
        .iter()
        .zip(&b.data)
        .map(|(x, y)| (x - phase * y).norm_sqr())
        .sum();
    Ok(d2.sqrt())
}
