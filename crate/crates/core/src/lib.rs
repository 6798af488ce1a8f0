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

//! Statevector simulation and CNOT-level transpilation for coined discrete-time
//! quantum walks on a cycle of `2^(N-1)` positions.
//!
//! The crate is layered bottom-up:
//!
//! * [`kernel`] — dense complex vectors and matrices (Kronecker products,
//!   unitarity checks, distance up to global phase).
//! * [`gates`] — the single-qubit gate catalog and multi-controlled NOT
//!   unitaries, with explicit sign conventions.
//! * [`circuit`] — the instruction IR plus two independent evaluation routes
//!   (gate-local statevector updates and full-unitary construction).
//! * [`qwc`] — a plain-text circuit format with a canonical emitter.
//! * [`transpile`] — lowering passes down to the CNOT + single-qubit basis,
//!   including an ancilla-free gray-code ladder for `n`-controlled NOT.
//! * [`noise`] — the probabilistic-CNOT error model (unit-norm columns with
//!   uniformly sampled error amplitudes) and noisy simulation.
//! * [`walker`] — circuit constructions for the cycle walker and its ideal
//!   matrix-power evolution.
//! * [`experiments`] — Monte-Carlo fidelity of the noisy transpiled walker,
//!   deterministic across thread counts via per-trial RNG streams.

pub mod circuit;
pub mod error;
pub mod experiments;
pub mod gates;
pub mod kernel;
pub mod noise;
pub mod qwc;
pub mod transpile;
pub mod walker;

pub use error::{Error, Result};

/// Widest register for which full `2^n x 2^n` unitaries may be built.
pub const MAX_UNITARY_QUBITS: usize = 12;

/// Hard cap on the dimension of either side of a Kronecker product.
pub const MAX_KRON_DIM: usize = 1 << 14;

/// Tolerance for state-vector norm checks.
pub const NORM_TOL: f64 = 1e-9;

/// Tolerance for matrix equivalence (distance up to global phase).
pub const EQUIV_TOL: f64 = 1e-10;

/// Tolerance for unitarity checks.
pub const UNITARY_TOL: f64 = 1e-12;

/// A noisy gate application renormalizes the state only when the squared norm
/// drifts from 1 by more than this, so noiseless runs stay bitwise exact.
pub const RENORM_EPS: f64 = 1e-12;
