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

//! Circuit IR: a register width plus an ordered list of instructions.
//!
//! An instruction is either a bare single-qubit gate or an X controlled by
//! one or more qubits with per-control polarity (`Negative` fires on `|0>`).
//! Controls are only allowed on X — that is the whole multi-controlled
//! vocabulary the lowering passes consume.
//!
//! Evaluation comes in two deliberately independent flavors that cross-check
//! each other in tests: [`simulate`] updates a state vector with gate-local
//! stride loops and never forms a big matrix, while [`circuit_unitary`]
//! builds the full `2^n x 2^n` operator from Kronecker products and control
//! projectors.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::gates::{gate_matrix, GateKind, Polarity};
use crate::kernel::{kron, Complex, SquareMatrix, StateVector, MAX_STATE_QUBITS};
use crate::MAX_UNITARY_QUBITS;

/// One gate application: `gate` on `target`, optionally controlled.
#[derive(Clone, Debug, PartialEq)]
pub struct Instruction {
    pub gate: GateKind,
    pub target: usize,
    /// Control qubits with polarity; non-empty only for `GateKind::PauliX`.
    pub controls: Vec<(usize, Polarity)>,
}

impl Instruction {
    /// A bare single-qubit gate.
    #[must_use]
    pub fn single(gate: GateKind, target: usize) -> Self {
        Self {
            gate,
            target,
            controls: Vec::new(),
        }
    }

    /// An uncontrolled X.
    #[must_use]
    pub fn x(target: usize) -> Self {
        Self::single(GateKind::PauliX, target)
    }

    /// A CNOT with a positive control.
    #[must_use]
    pub fn cnot(control: usize, target: usize) -> Self {
        Self {
            gate: GateKind::PauliX,
            target,
            controls: vec![(control, Polarity::Positive)],
        }
    }

    /// An X controlled on every listed qubit with the given polarities.
    #[must_use]
    pub fn mcx(controls: Vec<(usize, Polarity)>, target: usize) -> Self {
        Self {
            gate: GateKind::PauliX,
            target,
            controls,
        }
    }

    #[must_use]
    pub fn num_controls(&self) -> usize {
        self.controls.len()
    }

    /// True for a plain CNOT: one positive control on an X.
    #[must_use]
    pub fn is_cnot(&self) -> bool {
        self.gate == GateKind::PauliX
            && self.controls.len() == 1
            && self.controls[0].1 == Polarity::Positive
    }

    fn validate(&self, width: usize) -> Result<()> {
        if self.target >= width {
            return Err(Error::Invalid(format!(
                "target qubit {} out of range for width {width}",
                self.target
            )));
        }
        if !self.controls.is_empty() && self.gate != GateKind::PauliX {
            return Err(Error::Invalid(format!(
                "controls are only supported on x, not {}",
                self.gate.mnemonic()
            )));
        }
        let mut seen = vec![false; width];
        seen[self.target] = true;
        for &(q, _) in &self.controls {
            if q >= width {
                return Err(Error::Invalid(format!(
                    "control qubit {q} out of range for width {width}"
                )));
            }
            if seen[q] {
                return Err(Error::Invalid(format!(
                    "qubit {q} appears twice in one instruction"
                )));
            }
            seen[q] = true;
        }
        Ok(())
    }
}

/// An ordered gate list on a fixed-width register.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    num_qubits: usize,
    instructions: Vec<Instruction>,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_STATE_QUBITS {
            return Err(Error::Capacity {
                what: "circuit register",
                required: num_qubits,
                cap: MAX_STATE_QUBITS,
            });
        }
        Ok(Self {
            num_qubits,
            instructions: Vec::new(),
        })
    }

    pub fn push(&mut self, instruction: Instruction) -> Result<()> {
        instruction.validate(self.num_qubits)?;
        self.instructions.push(instruction);
        Ok(())
    }

    /// Appends every instruction of `other`, which must have the same width.
    pub fn extend_from(&mut self, other: &Circuit) -> Result<()> {
        if other.num_qubits != self.num_qubits {
            return Err(Error::DimensionMismatch {
                expected: self.num_qubits,
                got: other.num_qubits,
            });
        }
        self.instructions.extend_from_slice(&other.instructions);
        Ok(())
    }

    #[must_use]
    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    #[must_use]
    pub fn instructions(&self) -> &[Instruction] {
        &self.instructions
    }

    #[must_use]
    pub fn len(&self) -> usize {
        self.instructions.len()
    }

    #[must_use]
    pub fn is_empty(&self) -> bool {
        self.instructions.is_empty()
    }
}

/// Gate census of a circuit.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct GateCounts {
    /// Plain CNOTs (one positive control on X).
    pub cnot: usize,
    /// Bare single-qubit gates.
    pub single_qubit: usize,
    /// Remaining controlled X gates, keyed by control count. A 1-control
    /// entry here is a negative-control CNOT.
    pub mcx_by_arity: BTreeMap<usize, usize>,
}

impl GateCounts {
    #[must_use]
    pub fn total(&self) -> usize {
        self.cnot + self.single_qubit + self.mcx_by_arity.values().sum::<usize>()
    }
}

/// Counts gates by class; see [`GateCounts`].
#[must_use]
pub fn count_gates(circuit: &Circuit) -> GateCounts {
    let mut counts = GateCounts::default();
    for ins in circuit.instructions() {
        if ins.controls.is_empty() {
            counts.single_qubit += 1;
        } else if ins.is_cnot() {
            counts.cnot += 1;
        } else {
            *counts.mcx_by_arity.entry(ins.num_controls()).or_insert(0) += 1;
        }
    }
    counts
}

/// True when every instruction is a bare single-qubit gate or a plain CNOT —
/// the target basis of the full lowering pipeline and the precondition of
/// noisy simulation.
#[must_use]
pub fn is_cnot_basis(circuit: &Circuit) -> bool {
    circuit
        .instructions()
        .iter()
        .all(|ins| ins.controls.is_empty() || ins.is_cnot())
}

/// Applies the circuit to `input` gate by gate with stride-local updates.
pub fn simulate(circuit: &Circuit, input: &StateVector) -> Result<StateVector> {
    if input.num_qubits() != circuit.num_qubits {
        return Err(Error::DimensionMismatch {
            expected: 1 << circuit.num_qubits,
            got: input.dim(),
        });
    }
    let mut state = input.clone();
    for ins in circuit.instructions() {
        apply_instruction(&mut state, ins);
    }
    Ok(state)
}

pub(crate) fn apply_instruction(state: &mut StateVector, ins: &Instruction) {
    if ins.controls.is_empty() {
        let m = gate_matrix(ins.gate);
        let entries = [m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1)];
        apply_single(state, &entries, ins.target);
    } else {
        apply_controlled_x(state, &ins.controls, ins.target);
    }
}

/// In-place 2x2 update on qubit `target`; `m` is row-major.
pub(crate) fn apply_single(state: &mut StateVector, m: &[Complex; 4], target: usize) {
    let stride = 1usize << target;
    let amps = state.amps_mut();
    let dim = amps.len();
    let mut base = 0;
    while base < dim {
        for low in base..base + stride {
            let a0 = amps[low];
            let a1 = amps[low + stride];
            amps[low] = m[0] * a0 + m[1] * a1;
            amps[low + stride] = m[2] * a0 + m[3] * a1;
        }
        base += stride << 1;
    }
}

fn controls_active(index: usize, controls: &[(usize, Polarity)]) -> bool {
    controls
        .iter()
        .all(|&(q, p)| ((index >> q) & 1 == 1) == (p == Polarity::Positive))
}

fn apply_controlled_x(state: &mut StateVector, controls: &[(usize, Polarity)], target: usize) {
    let amps = state.amps_mut();
    let tbit = 1usize << target;
    for idx in 0..amps.len() {
        if idx & tbit == 0 && controls_active(idx, controls) {
            amps.swap(idx, idx | tbit);
        }
    }
}

/// Builds the circuit's full unitary from Kronecker products.
///
/// Controlled X gates enter as `X_t ⊗ P_active + I ⊗ (I - P_active)` where
/// the projector is evaluated per basis column. Only valid up to
/// [`MAX_UNITARY_QUBITS`] wires.
pub fn circuit_unitary(circuit: &Circuit) -> Result<SquareMatrix> {
    let width = circuit.num_qubits;
    if width > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            what: "circuit unitary",
            required: 1 << width,
            cap: 1 << MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << width;
    let mut u = SquareMatrix::identity(dim);
    for ins in circuit.instructions() {
        let m = instruction_unitary(ins, width)?;
        u = m.mul(&u)?;
    }
    Ok(u)
}

fn embed_single(gate: &SquareMatrix, qubit: usize, width: usize) -> Result<SquareMatrix> {
    let high = SquareMatrix::identity(1 << (width - 1 - qubit));
    let low = SquareMatrix::identity(1 << qubit);
    kron(&kron(&high, gate)?, &low)
}

fn instruction_unitary(ins: &Instruction, width: usize) -> Result<SquareMatrix> {
    let embedded_gate = embed_single(&gate_matrix(ins.gate), ins.target, width)?;
    if ins.controls.is_empty() {
        return Ok(embedded_gate);
    }
    // X_embedded * P + (I - P): columns where the controls fire copy the
    // embedded X, the rest stay identity.
    let dim = 1usize << width;
    let mut m = SquareMatrix::zeros(dim);
    for col in 0..dim {
        if controls_active(col, &ins.controls) {
            for row in 0..dim {
                m.set(row, col, embedded_gate.get(row, col));
            }
        } else {
            m.set(col, col, Complex::new(1.0, 0.0));
        }
    }
    Ok(m)
}

/// Builds the circuit's unitary column-by-column with [`simulate`].
///
/// Same result as [`circuit_unitary`] but O(gates * 4^n) instead of
/// O(gates * 8^n); the lowering passes use it for verification.
pub(crate) fn unitary_via_simulation(circuit: &Circuit) -> Result<SquareMatrix> {
    let width = circuit.num_qubits;
    if width > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            what: "circuit unitary",
            required: 1 << width,
            cap: 1 << MAX_UNITARY_QUBITS,
        });
    }
    let dim = 1usize << width;
    let mut u = SquareMatrix::zeros(dim);
    for col in 0..dim {
        let out = simulate(circuit, &StateVector::basis_state(width, col)?)?;
        for (row, amp) in out.amps().iter().enumerate() {
            u.set(row, col, *amp);
        }
    }
    Ok(u)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::kernel::{is_unitary, mat_apply};
    use crate::UNITARY_TOL;
    use proptest::prelude::*;
    use std::f64::consts::PI;

    fn bell_circuit() -> Circuit {
        let mut c = Circuit::new(2).unwrap();
        c.push(Instruction::single(GateKind::Hadamard, 0)).unwrap();
        c.push(Instruction::cnot(0, 1)).unwrap();
        c
    }

    #[test]
    fn bell_state_amplitudes() {
        let s = simulate(&bell_circuit(), &StateVector::zero_state(2).unwrap()).unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        assert!((s.amps()[0].re - h).abs() < 1e-15);
        assert!((s.amps()[3].re - h).abs() < 1e-15);
        assert!(s.amps()[1].norm() < 1e-15);
        assert!(s.amps()[2].norm() < 1e-15);
    }

    #[test]
    fn validation_rejects_bad_instructions() {
        let mut c = Circuit::new(2).unwrap();
        assert!(c.push(Instruction::single(GateKind::Hadamard, 2)).is_err());
        assert!(c.push(Instruction::cnot(1, 1)).is_err());
        assert!(c
            .push(Instruction {
                gate: GateKind::Hadamard,
                target: 0,
                controls: vec![(1, Polarity::Positive)],
            })
            .is_err());
        assert!(c
            .push(Instruction::mcx(
                vec![(1, Polarity::Positive), (1, Polarity::Negative)],
                0
            ))
            .is_err());
    }

    #[test]
    fn negative_control_fires_on_zero() {
        let mut c = Circuit::new(2).unwrap();
        c.push(Instruction::mcx(vec![(1, Polarity::Negative)], 0))
            .unwrap();
        let s = simulate(&c, &StateVector::zero_state(2).unwrap()).unwrap();
        assert!((s.amps()[1].re - 1.0).abs() < 1e-15); // |00> -> |01>
        let s2 = simulate(&c, &StateVector::basis_state(2, 2).unwrap()).unwrap();
        assert!((s2.amps()[2].re - 1.0).abs() < 1e-15); // |10> untouched
    }

    #[test]
    fn count_gates_classifies_instructions() {
        let mut c = Circuit::new(4).unwrap();
        c.push(Instruction::single(GateKind::Hadamard, 0)).unwrap();
        c.push(Instruction::cnot(0, 1)).unwrap();
        c.push(Instruction::mcx(vec![(0, Polarity::Negative)], 1))
            .unwrap();
        c.push(Instruction::mcx(
            vec![
                (0, Polarity::Positive),
                (1, Polarity::Positive),
                (2, Polarity::Negative),
            ],
            3,
        ))
        .unwrap();
        let counts = count_gates(&c);
        assert_eq!(counts.cnot, 1);
        assert_eq!(counts.single_qubit, 1);
        assert_eq!(counts.mcx_by_arity.get(&1), Some(&1));
        assert_eq!(counts.mcx_by_arity.get(&3), Some(&1));
        assert_eq!(counts.total(), 4);
    }

    #[test]
    fn circuit_unitary_matches_simulation_on_every_basis_column() {
        // mixed circuit: single-qubit gates, CNOT, negative-control mcx
        let mut c = Circuit::new(3).unwrap();
        c.push(Instruction::single(GateKind::Hadamard, 2)).unwrap();
        c.push(Instruction::single(GateKind::RotY(PI / 8.0), 0))
            .unwrap();
        c.push(Instruction::cnot(2, 0)).unwrap();
        c.push(Instruction::single(GateKind::RotZ(PI / 2.0), 1))
            .unwrap();
        c.push(Instruction::mcx(
            vec![(2, Polarity::Negative), (1, Polarity::Positive)],
            0,
        ))
        .unwrap();
        c.push(Instruction::single(GateKind::U2(0.3, -0.4), 1))
            .unwrap();

        let u = circuit_unitary(&c).unwrap();
        assert!(is_unitary(&u, UNITARY_TOL));
        let via_sim = unitary_via_simulation(&c).unwrap();
        assert!(u.max_abs_diff(&via_sim).unwrap() < 1e-13);

        // and mat_apply through the big matrix agrees with simulate
        for idx in 0..8 {
            let basis = StateVector::basis_state(3, idx).unwrap();
            let a = simulate(&c, &basis).unwrap();
            let b = mat_apply(&u, &basis).unwrap();
            for (x, y) in a.amps().iter().zip(b.amps()) {
                assert!((x - y).norm() < 1e-13);
            }
        }
    }

    #[test]
    fn extend_from_requires_same_width() {
        let mut a = Circuit::new(2).unwrap();
        let b = Circuit::new(3).unwrap();
        assert!(a.extend_from(&b).is_err());
        let c = bell_circuit();
        a.extend_from(&c).unwrap();
        assert_eq!(a.len(), 2);
    }

    prop_compose! {
        fn arb_gate()(which in 0usize..6, a in -3.2f64..3.2, b in -3.2f64..3.2, t in -3.2f64..3.2)
            -> GateKind
        {
            match which {
                0 => GateKind::Hadamard,
                1 => GateKind::PauliX,
                2 => GateKind::RotY(a),
                3 => GateKind::RotZ(a),
                4 => GateKind::U2(a, b),
                _ => GateKind::U3(t, a, b),
            }
        }
    }

    fn arb_circuit(width: usize, max_len: usize) -> impl Strategy<Value = Circuit> {
        let instr = (
            arb_gate(),
            0..width,
            proptest::option::of((0..width, any::<bool>())),
        )
            .prop_filter_map(
                "control == target",
                move |(gate, target, ctrl)| match ctrl {
                    None => Some(Instruction::single(gate, target)),
                    Some((c, _)) if c == target => None,
                    Some((c, neg)) => {
                        let p = if neg {
                            Polarity::Negative
                        } else {
                            Polarity::Positive
                        };
                        Some(Instruction::mcx(vec![(c, p)], target))
                    }
                },
            )
            .prop_map(|mut ins| {
                if !ins.controls.is_empty() {
                    ins.gate = GateKind::PauliX;
                }
                ins
            });
        proptest::collection::vec(instr, 0..max_len).prop_map(move |instrs| {
            let mut c = Circuit::new(width).unwrap();
            for i in instrs {
                c.push(i).unwrap();
            }
            c
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn simulation_preserves_norm(c in arb_circuit(3, 12)) {
            let s = simulate(&c, &StateVector::zero_state(3).unwrap()).unwrap();
            prop_assert!((s.norm() - 1.0).abs() < 1e-12);
        }

        #[test]
        fn unitary_construction_routes_agree(c in arb_circuit(3, 10)) {
            let a = circuit_unitary(&c).unwrap();
            let b = unitary_via_simulation(&c).unwrap();
            prop_assert!(a.max_abs_diff(&b).unwrap() < 1e-12);
        }
    }
}
