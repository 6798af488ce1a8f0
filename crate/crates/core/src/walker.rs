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

//! Coined discrete-time quantum walk on a cycle of `2^(N-1)` positions.
//!
//! Register layout on `N` qubits: qubit 0 is the coin; position bit `j` lives
//! on qubit `j + 1`. The basis index of position `k` with coin `c` is
//! `2k + c`, and a ket label `|p_{N-2} ... p_0 c>` reads most significant
//! qubit first.
//!
//! One step applies a Hadamard coin flip, then a decrement cascade active on
//! coin `|0>`, then an increment cascade active on coin `|1>`: the walker
//! moves left or right on the cycle conditioned on the coin. Increment is a
//! descending chain of positively-controlled X gates (each position bit
//! flips when the coin and every lower position bit are 1 — binary carry);
//! decrement is the same chain with every control negated (borrow).

use serde::Serialize;

use crate::circuit::{simulate, Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{GateKind, Polarity};
use crate::kernel::{mat_apply, SquareMatrix, StateVector};
use crate::MAX_UNITARY_QUBITS;

/// Parameters of a walk run.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WalkerSpec {
    /// Total register width `N` (1 coin + `N-1` position qubits).
    pub num_qubits: usize,
    /// Starting position on the cycle, in `0..2^(N-1)`.
    pub start_position: usize,
    /// Initial coin bit.
    pub initial_coin: u8,
    /// Number of walk steps.
    pub steps: usize,
}

impl WalkerSpec {
    pub fn new(
        num_qubits: usize,
        start_position: usize,
        initial_coin: u8,
        steps: usize,
    ) -> Result<Self> {
        check_walker_width(num_qubits)?;
        let positions = 1usize << (num_qubits - 1);
        if start_position >= positions {
            return Err(Error::Invalid(format!(
                "start position {start_position} out of range for {positions} positions"
            )));
        }
        if initial_coin > 1 {
            return Err(Error::Invalid(format!(
                "coin must be 0 or 1, got {initial_coin}"
            )));
        }
        Ok(Self {
            num_qubits,
            start_position,
            initial_coin,
            steps,
        })
    }

    /// Number of cycle positions, `2^(N-1)`.
    #[must_use]
    pub fn num_positions(&self) -> usize {
        1 << (self.num_qubits - 1)
    }
}

fn check_walker_width(num_qubits: usize) -> Result<()> {
    if num_qubits < 2 {
        return Err(Error::Invalid(format!(
            "the walker needs a coin and at least one position qubit, got width {num_qubits}"
        )));
    }
    if num_qubits > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            what: "walker register",
            required: 1 << num_qubits,
            cap: 1 << MAX_UNITARY_QUBITS,
        });
    }
    Ok(())
}

/// Basis index of position `k` with coin `c`.
#[must_use]
pub fn position_basis_index(position: usize, coin: u8) -> usize {
    2 * position + usize::from(coin)
}

/// `|P_start>|coin>` as a state vector.
pub fn initial_state(spec: &WalkerSpec) -> Result<StateVector> {
    StateVector::basis_state(
        spec.num_qubits,
        position_basis_index(spec.start_position, spec.initial_coin),
    )
}

/// The increment cascade: adds 1 to the position register when the coin
/// is `|1>`, wrapping on the cycle.
pub fn build_increment(num_qubits: usize) -> Result<Circuit> {
    build_cascade(num_qubits, Polarity::Positive)
}

/// The decrement cascade: subtracts 1 from the position register when the
/// coin is `|0>`; every control (coin included) is negative.
pub fn build_decrement(num_qubits: usize) -> Result<Circuit> {
    build_cascade(num_qubits, Polarity::Negative)
}

fn build_cascade(num_qubits: usize, polarity: Polarity) -> Result<Circuit> {
    check_walker_width(num_qubits)?;
    let mut c = Circuit::new(num_qubits)?;
    // highest position bit first: it needs the carry/borrow from all below
    for target in (2..num_qubits).rev() {
        let mut controls: Vec<(usize, Polarity)> = vec![(0, polarity)];
        controls.extend((1..target).map(|q| (q, polarity)));
        c.push(Instruction::mcx(controls, target))?;
    }
    let lowest = Instruction::mcx(vec![(0, polarity)], 1);
    c.push(lowest)?;
    Ok(c)
}

/// One full walk step: coin Hadamard, decrement, increment.
pub fn build_walker_step(num_qubits: usize) -> Result<Circuit> {
    check_walker_width(num_qubits)?;
    let mut c = Circuit::new(num_qubits)?;
    c.push(Instruction::single(GateKind::Hadamard, 0))?;
    c.extend_from(&build_decrement(num_qubits)?)?;
    c.extend_from(&build_increment(num_qubits)?)?;
    Ok(c)
}

/// X-preparation of the start state followed by `steps` walk steps, so the
/// circuit reproduces the walk from `|0...0>`.
pub fn build_walker_circuit(spec: &WalkerSpec) -> Result<Circuit> {
    let mut c = Circuit::new(spec.num_qubits)?;
    for j in 0..spec.num_qubits - 1 {
        if (spec.start_position >> j) & 1 == 1 {
            c.push(Instruction::x(j + 1))?;
        }
    }
    if spec.initial_coin == 1 {
        c.push(Instruction::x(0))?;
    }
    let step = build_walker_step(spec.num_qubits)?;
    for _ in 0..spec.steps {
        c.extend_from(&step)?;
    }
    Ok(c)
}

/// The full `2^N x 2^N` unitary of one walk step.
pub fn ideal_step_unitary(num_qubits: usize) -> Result<SquareMatrix> {
    crate::circuit::circuit_unitary(&build_walker_step(num_qubits)?)
}

/// Evolves the start state by `steps` applications of the step unitary.
/// Reference evolution for fidelity experiments — no circuit lowering
/// involved.
pub fn evolve_ideal(spec: &WalkerSpec) -> Result<StateVector> {
    let u = ideal_step_unitary(spec.num_qubits)?;
    let mut state = initial_state(spec)?;
    for _ in 0..spec.steps {
        state = mat_apply(&u, &state)?;
    }
    Ok(state)
}

/// Convenience: simulate the prepared walker circuit from `|0...0>`.
pub fn run_walker_circuit(spec: &WalkerSpec) -> Result<StateVector> {
    let c = build_walker_circuit(spec)?;
    simulate(&c, &StateVector::zero_state(spec.num_qubits)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::count_gates;
    use crate::kernel::is_unitary;
    use crate::UNITARY_TOL;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn spec_validation() {
        assert!(WalkerSpec::new(4, 7, 0, 1).is_ok());
        assert!(WalkerSpec::new(4, 8, 0, 1).is_err());
        assert!(WalkerSpec::new(4, 0, 2, 1).is_err());
        assert!(WalkerSpec::new(1, 0, 0, 1).is_err());
        assert!(WalkerSpec::new(13, 0, 0, 1).is_err());
    }

    #[test]
    fn increment_is_a_cyclic_shift_on_coin_one() {
        let inc = build_increment(4).unwrap();
        for k in 0..8usize {
            let input = StateVector::basis_state(4, position_basis_index(k, 1)).unwrap();
            let out = simulate(&inc, &input).unwrap();
            let expect = position_basis_index((k + 1) % 8, 1);
            assert!((out.amps()[expect].re - 1.0).abs() < 1e-15, "k={k}");
            // coin zero is untouched
            let idle = StateVector::basis_state(4, position_basis_index(k, 0)).unwrap();
            let out0 = simulate(&inc, &idle).unwrap();
            assert!((out0.amps()[position_basis_index(k, 0)].re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn decrement_is_the_inverse_shift_on_coin_zero() {
        let dec = build_decrement(4).unwrap();
        for k in 0..8usize {
            let input = StateVector::basis_state(4, position_basis_index(k, 0)).unwrap();
            let out = simulate(&dec, &input).unwrap();
            let expect = position_basis_index((k + 8 - 1) % 8, 0);
            assert!((out.amps()[expect].re - 1.0).abs() < 1e-15, "k={k}");
            // coin one is untouched
            let idle = StateVector::basis_state(4, position_basis_index(k, 1)).unwrap();
            let out1 = simulate(&dec, &idle).unwrap();
            assert!((out1.amps()[position_basis_index(k, 1)].re - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn eight_increments_wrap_to_identity() {
        let inc = build_increment(4).unwrap();
        let u = crate::circuit::circuit_unitary(&inc).unwrap();
        let mut acc = SquareMatrix::identity(16);
        for _ in 0..8 {
            acc = u.mul(&acc).unwrap();
        }
        assert!(acc.max_abs_diff(&SquareMatrix::identity(16)).unwrap() < 1e-9);
    }

    #[test]
    fn one_step_from_origin_splits_left_and_right() {
        // |P_0>|0> -> (|P_7>|0> + |P_1>|1>) / sqrt(2)
        let spec = WalkerSpec::new(4, 0, 0, 1).unwrap();
        let s = evolve_ideal(&spec).unwrap();
        let h = FRAC_1_SQRT_2;
        for (idx, amp) in s.amps().iter().enumerate() {
            let expect = match idx {
                x if x == position_basis_index(7, 0) => h,
                x if x == position_basis_index(1, 1) => h,
                _ => 0.0,
            };
            assert!((amp.re - expect).abs() < 1e-12, "index {idx}");
            assert!(amp.im.abs() < 1e-12);
        }
    }

    #[test]
    fn one_step_label_check_for_every_start() {
        // |P_k>|0> -> (|P_{k-1}>|0> + |P_{k+1}>|1>) / sqrt(2)
        let h = FRAC_1_SQRT_2;
        for k in 0..8usize {
            let spec = WalkerSpec::new(4, k, 0, 1).unwrap();
            let s = evolve_ideal(&spec).unwrap();
            let left = position_basis_index((k + 7) % 8, 0);
            let right = position_basis_index((k + 1) % 8, 1);
            assert!((s.amps()[left].re - h).abs() < 1e-12);
            assert!((s.amps()[right].re - h).abs() < 1e-12);
            let residual: f64 = s
                .amps()
                .iter()
                .enumerate()
                .filter(|(i, _)| *i != left && *i != right)
                .map(|(_, a)| a.norm_sqr())
                .sum();
            assert!(residual < 1e-24);
        }
    }

    #[test]
    fn two_steps_produce_the_half_amplitude_pattern() {
        // |P_0>|0> ->
        //   (|P_6>|0> + |P_0>|1> + |P_0>|0> - |P_2>|1>) / 2
        let spec = WalkerSpec::new(4, 0, 0, 2).unwrap();
        let s = evolve_ideal(&spec).unwrap();
        let cases = [
            (position_basis_index(6, 0), 0.5),
            (position_basis_index(0, 1), 0.5),
            (position_basis_index(0, 0), 0.5),
            (position_basis_index(2, 1), -0.5),
        ];
        let mut covered = 0.0;
        for (idx, expect) in cases {
            assert!((s.amps()[idx].re - expect).abs() < 1e-12, "index {idx}");
            covered += expect * expect;
        }
        assert!((covered - 1.0).abs() < 1e-12);
    }

    #[test]
    fn step_unitary_is_unitary_and_matches_circuit_run() {
        let u = ideal_step_unitary(4).unwrap();
        assert!(is_unitary(&u, UNITARY_TOL));

        let spec = WalkerSpec::new(4, 5, 1, 3).unwrap();
        let via_circuit = run_walker_circuit(&spec).unwrap();
        let via_matrix = evolve_ideal(&spec).unwrap();
        for (a, b) in via_circuit.amps().iter().zip(via_matrix.amps()) {
            assert!((a - b).norm() < 1e-12);
        }
    }

    #[test]
    fn walker_circuit_prepares_start_state() {
        let spec = WalkerSpec::new(4, 5, 1, 0).unwrap();
        let s = run_walker_circuit(&spec).unwrap();
        let expect = position_basis_index(5, 1);
        assert!((s.amps()[expect].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn raw_step_gate_census() {
        let counts = count_gates(&build_walker_step(4).unwrap());
        assert_eq!(counts.single_qubit, 1); // the coin Hadamard
        assert_eq!(counts.cnot, 1); // increment's lowest link
        assert_eq!(counts.mcx_by_arity.get(&1), Some(&1)); // decrement's lowest link
        assert_eq!(counts.mcx_by_arity.get(&2), Some(&2));
        assert_eq!(counts.mcx_by_arity.get(&3), Some(&2));
    }

    #[test]
    fn norms_stay_unit_over_many_steps() {
        for steps in [10, 25, 50] {
            let spec = WalkerSpec::new(3, 1, 0, steps).unwrap();
            let s = evolve_ideal(&spec).unwrap();
            assert!((s.norm() - 1.0).abs() < 1e-9);
        }
    }
}
