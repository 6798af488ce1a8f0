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

//! Error type shared across the crate.

use thiserror::Error;

/// Errors surfaced by contract violations, capacity limits, and parsing.
#[derive(Debug, Error)]
pub enum Error {
    /// An operand had the wrong dimension for the operation.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    /// The operation would exceed a hard size cap.
    #[error("{what} needs dimension {required}, which exceeds the cap of {cap}")]
    Capacity {
        what: &'static str,
        required: usize,
        cap: usize,
    },

    /// A circuit file failed to parse; `line` is 1-based.
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    /// Invalid arguments or configuration (bad qubit indices, ranges, ...).
    #[error("{0}")]
    Invalid(String),

    /// A sampled noise column had total error weight >= 1, so beta would be
    /// imaginary. `column` is 1-based.
    #[error("noise sample column {column} has error weight {weight:.6} >= 1")]
    NoiseWeight { column: usize, weight: f64 },

    /// Noisy simulation requires a circuit lowered to CNOT + single-qubit.
    #[error("circuit is not in the CNOT + single-qubit basis: {0}")]
    NotCnotBasis(String),

    /// A lowering pass produced a circuit that does not match its input.
    #[error("lowering verification failed: distance {dist:.3e} exceeds {tol:.0e}")]
    Verification { dist: f64, tol: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
