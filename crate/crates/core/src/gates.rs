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

//! Single-qubit gate catalog and multi-controlled NOT unitaries.
//!
//! Sign conventions (note the off-diagonal signs of `RotY` and the exponent
//! signs of `RotZ` — both differ from some textbook choices):
//!
//! ```text
//! RotY(t)  = [[cos(t/2),  sin(t/2)], [-sin(t/2), cos(t/2)]]
//! RotZ(a)  = diag(e^{i a/2}, e^{-i a/2})
//! Phase(d) = e^{i d} I                      (pure global phase)
//! T(p)     = diag(1, e^{i p})               (T(pi/4) is the usual T gate)
//! U1(l)    = diag(1, e^{i l})
//! U2(p,l)  = ((1, -e^{i l}), (e^{i p}, e^{i (l+p)})) / sqrt(2)
//! U3(t,p,l)= ((cos(t/2), -e^{i l} sin(t/2)),
//!             (e^{i p} sin(t/2), e^{i (l+p)} cos(t/2)))
//! ```
//!
//! Useful identities, unit-tested below: `U3(pi,0,pi) = X`, `U2(0,pi) = H`,
//! and `T(p) = RotZ(-p) * Phase(p/2)`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::kernel::{Complex, SquareMatrix};
use crate::MAX_UNITARY_QUBITS;

/// Control polarity: `Negative` triggers on `|0>`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
pub enum Polarity {
    Positive,
    Negative,
}

/// The single-qubit gates understood by the circuit IR.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum GateKind {
    Identity,
    Hadamard,
    PauliX,
    RotY(f64),
    RotZ(f64),
    /// Global phase `e^{i delta} I`; kept as a gate so transpiled circuits
    /// can carry exact phase bookkeeping on a specific wire.
    GlobalPhase(f64),
    /// Relative phase `diag(1, e^{i phi})`.
    TPhase(f64),
    U1(f64),
    U2(f64, f64),
    U3(f64, f64, f64),
}

impl GateKind {
    /// The 2x2 matrix of this gate.
    #[must_use]
    pub fn matrix(&self) -> SquareMatrix {
        gate_matrix(*self)
    }

    /// The lowercase mnemonic used by the text format.
    #[must_use]
    pub fn mnemonic(&self) -> &'static str {
        match self {
            GateKind::Identity => "id",
            GateKind::Hadamard => "h",
            GateKind::PauliX => "x",
            GateKind::RotY(_) => "ry",
            GateKind::RotZ(_) => "rz",
            GateKind::GlobalPhase(_) => "phase",
            GateKind::TPhase(_) => "t",
            GateKind::U1(_) => "u1",
            GateKind::U2(..) => "u2",
            GateKind::U3(..) => "u3",
        }
    }

    /// The gate's angle parameters in declaration order.
    #[must_use]
    pub fn params(&self) -> Vec<f64> {
        match *self {
            GateKind::Identity | GateKind::Hadamard | GateKind::PauliX => vec![],
            GateKind::RotY(a)
            | GateKind::RotZ(a)
            | GateKind::GlobalPhase(a)
            | GateKind::TPhase(a)
            | GateKind::U1(a) => vec![a],
            GateKind::U2(p, l) => vec![p, l],
            GateKind::U3(t, p, l) => vec![t, p, l],
        }
    }
}

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn expi(theta: f64) -> Complex {
    Complex::from_polar(1.0, theta)
}

/// The 2x2 matrix of a single-qubit gate, in the conventions above.
#[must_use]
pub fn gate_matrix(gate: GateKind) -> SquareMatrix {
    let rows = match gate {
        GateKind::Identity => [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), c(1.0, 0.0)]],
        GateKind::Hadamard => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(-h, 0.0)]]
        }
        GateKind::PauliX => [[c(0.0, 0.0), c(1.0, 0.0)], [c(1.0, 0.0), c(0.0, 0.0)]],
        GateKind::RotY(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(s, 0.0)], [c(-s, 0.0), c(co, 0.0)]]
        }
        GateKind::RotZ(a) => [[expi(a / 2.0), c(0.0, 0.0)], [c(0.0, 0.0), expi(-a / 2.0)]],
        GateKind::GlobalPhase(d) => [[expi(d), c(0.0, 0.0)], [c(0.0, 0.0), expi(d)]],
        GateKind::TPhase(p) | GateKind::U1(p) => {
            [[c(1.0, 0.0), c(0.0, 0.0)], [c(0.0, 0.0), expi(p)]]
        }
        GateKind::U2(p, l) => {
            let h = std::f64::consts::FRAC_1_SQRT_2;
            [[c(h, 0.0), -expi(l) * h], [expi(p) * h, expi(l + p) * h]]
        }
        GateKind::U3(t, p, l) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), -expi(l) * s], [expi(p) * s, expi(l + p) * co]]
        }
    };
    SquareMatrix::from_rows(&[rows[0].to_vec(), rows[1].to_vec()]).expect("2x2 rows")
}

/// Full `2^(n+1) x 2^(n+1)` unitary of an n-controlled NOT.
///
/// Controls sit on the high bits in descending order (`polarities[0]` is the
/// highest qubit) and the target is bit 0. The X fires on the columns where
/// every control matches its polarity.
pub fn mcx_unitary(num_controls: usize, polarities: &[Polarity]) -> Result<SquareMatrix> {
    if num_controls == 0 {
        return Err(Error::Invalid(
            "mcx_unitary needs at least one control".into(),
        ));
    }
    if polarities.len() != num_controls {
        return Err(Error::Invalid(format!(
            "expected {num_controls} polarities, got {}",
            polarities.len()
        )));
    }
    let width = num_controls + 1;
    if width > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            what: "mcx unitary",
            required: 1 << width,
            cap: 1 << MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << width;
    let mut m = SquareMatrix::zeros(dim);
    for col in 0..dim {
        let active = polarities.iter().enumerate().all(|(i, p)| {
            let bit = (col >> (num_controls - i)) & 1;
            bit == usize::from(*p == Polarity::Positive)
        });
        let row = if active { col ^ 1 } else { col };
        m.set(row, col, c(1.0, 0.0));
    }
    Ok(m)
}
