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

//! Lowering passes from multi-controlled gates to the CNOT + single-qubit
//! basis.
//!
//! Negative controls are eliminated by conjugating with X. A 2-controlled X
//! becomes the textbook 6-CNOT Hadamard/T network. An `n >= 3`-controlled X
//! becomes an ancilla-free gray-code ladder of controlled `RotY(±pi/2^n)`
//! pairs threaded through `2^n - 2` recoding CNOTs, for `3*2^n - 4` CNOTs
//! total.
//!
//! The ladder's rotation pairs alone (see [`decompose_c3not_budget`]) realize
//! the NOT only up to a `-i` relative phase on the fully-controlled block:
//! each visited control parity contributes a conditional `RotX(±pi/2^n)` on
//! the target, and the surviving exponent equals X up to that phase. The
//! default decompositions therefore add `2^n - 1` diagonal `T(±pi/2^n)` gates
//! on the control lines — one per visited parity, placed exactly where the
//! recoding walk exposes that parity — which repairs the block phase without
//! any additional CNOTs and makes the lowering exact.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::circuit::{is_cnot_basis, unitary_via_simulation, Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{mcx_unitary, GateKind, Polarity};
use crate::kernel::dist_up_to_global_phase;
use crate::{EQUIV_TOL, MAX_UNITARY_QUBITS};

/// How far [`transpile`] lowers multi-controlled gates.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LoweringLevel {
    /// Only rewrite negative controls as X conjugation.
    EliminateNegativeControls,
    /// Additionally lower exactly-2-control X gates to the 6-CNOT network;
    /// wider gates pass through.
    ToToffoli,
    /// Lower everything to bare single-qubit gates and plain CNOTs.
    ToCnot,
}

/// Options for [`transpile_with`].
#[derive(Clone, Copy, Debug)]
pub struct TranspileOptions {
    /// Re-simulate and compare input vs output (circuits up to
    /// [`TRANSPILE_VERIFY_MAX_QUBITS`] wires; ladder instances are checked on
    /// a compact register up to [`MAX_UNITARY_QUBITS`] wires).
    pub verify: bool,
}

impl Default for TranspileOptions {
    fn default() -> Self {
        Self { verify: true }
    }
}

/// Whole-circuit verification is only attempted at or below this width.
pub const TRANSPILE_VERIFY_MAX_QUBITS: usize = 5;

/// Lowers `circuit` with default options (verification on).
pub fn transpile(circuit: &Circuit, level: LoweringLevel) -> Result<Circuit> {
    transpile_with(circuit, level, TranspileOptions::default())
}

/// Convenience for the full pipeline: [`LoweringLevel::ToCnot`] with
/// verification.
pub fn transpile_to_cnot(circuit: &Circuit) -> Result<Circuit> {
    transpile(circuit, LoweringLevel::ToCnot)
}

/// Lowers `circuit` to the requested level.
pub fn transpile_with(
    circuit: &Circuit,
    level: LoweringLevel,
    opts: TranspileOptions,
) -> Result<Circuit> {
    let stage = eliminate_negative_controls(circuit)?;
    let out = match level {
        LoweringLevel::EliminateNegativeControls => stage,
        LoweringLevel::ToToffoli => map_controlled(&stage, |ins| match ins.num_controls() {
            2 => decompose_toffoli(ins),
            _ => Ok(vec![ins.clone()]),
        })?,
        LoweringLevel::ToCnot => map_controlled(&stage, |ins| match ins.num_controls() {
            0 | 1 => Ok(vec![ins.clone()]),
            2 => decompose_toffoli(ins),
            3 => decompose_c3not(ins),
            _ => decompose_mcx(ins, opts.verify),
        })?,
    };
    if level == LoweringLevel::ToCnot && !is_cnot_basis(&out) {
        return Err(Error::NotCnotBasis(
            "lowering left a multi-controlled gate behind".into(),
        ));
    }
    if opts.verify && circuit.num_qubits() <= TRANSPILE_VERIFY_MAX_QUBITS {
        let a = unitary_via_simulation(circuit)?;
        let b = unitary_via_simulation(&out)?;
        let dist = dist_up_to_global_phase(&b, &a)?;
        if dist > EQUIV_TOL {
            return Err(Error::Verification {
                dist,
                tol: EQUIV_TOL,
            });
        }
    }
    Ok(out)
}

fn map_controlled<F>(circuit: &Circuit, mut f: F) -> Result<Circuit>
where
    F: FnMut(&Instruction) -> Result<Vec<Instruction>>,
{
    let mut out = Circuit::new(circuit.num_qubits())?;
    for ins in circuit.instructions() {
        if ins.controls.is_empty() {
            out.push(ins.clone())?;
        } else {
            for lowered in f(ins)? {
                out.push(lowered)?;
            }
        }
    }
    Ok(out)
}

/// Rewrites every negative control as X conjugation, leaving only
/// positive-control gates.
pub fn eliminate_negative_controls(circuit: &Circuit) -> Result<Circuit> {
    map_controlled(circuit, |ins| {
        let negatives: Vec<usize> = ins
            .controls
            .iter()
            .filter(|(_, p)| *p == Polarity::Negative)
            .map(|&(q, _)| q)
            .collect();
        if negatives.is_empty() {
            return Ok(vec![ins.clone()]);
        }
        let mut out = Vec::with_capacity(ins.controls.len() * 2 + 1);
        for &q in &negatives {
            out.push(Instruction::x(q));
        }
        out.push(Instruction::mcx(
            ins.controls
                .iter()
                .map(|&(q, _)| (q, Polarity::Positive))
                .collect(),
            ins.target,
        ));
        for &q in &negatives {
            out.push(Instruction::x(q));
        }
        Ok(out)
    })
}

fn require_positive_controls(ins: &Instruction, arity: Option<usize>) -> Result<()> {
    if let Some(n) = arity {
        if ins.num_controls() != n {
            return Err(Error::Invalid(format!(
                "expected {n} controls, got {}",
                ins.num_controls()
            )));
        }
    }
    if ins.controls.iter().any(|(_, p)| *p == Polarity::Negative) {
        return Err(Error::Invalid(
            "negative controls must be eliminated before this lowering".into(),
        ));
    }
    Ok(())
}

/// Lowers a 2-controlled X to the 6-CNOT Hadamard/T network.
pub fn decompose_toffoli(ins: &Instruction) -> Result<Vec<Instruction>> {
    require_positive_controls(ins, Some(2))?;
    let a = ins.controls[0].0;
    let b = ins.controls[1].0;
    let t = ins.target;
    let quarter = PI / 4.0;
    Ok(vec![
        Instruction::single(GateKind::Hadamard, t),
        Instruction::cnot(b, t),
        Instruction::single(GateKind::TPhase(-quarter), t),
        Instruction::cnot(a, t),
        Instruction::single(GateKind::TPhase(quarter), t),
        Instruction::cnot(b, t),
        Instruction::single(GateKind::TPhase(-quarter), t),
        Instruction::cnot(a, t),
        Instruction::single(GateKind::TPhase(quarter), b),
        Instruction::single(GateKind::TPhase(quarter), t),
        Instruction::single(GateKind::Hadamard, t),
        Instruction::cnot(a, b),
        Instruction::single(GateKind::TPhase(quarter), a),
        Instruction::single(GateKind::TPhase(-quarter), b),
        Instruction::cnot(a, b),
    ])
}

/// Lowers a 3-controlled X exactly: 20 CNOTs and 23 single-qubit gates
/// (`RotZ(±pi/2)` bracket, 14 `RotY(±pi/8)`, and 7 diagonal `T(±pi/8)` phase
/// corrections).
pub fn decompose_c3not(ins: &Instruction) -> Result<Vec<Instruction>> {
    require_positive_controls(ins, Some(3))?;
    let controls: Vec<usize> = ins.controls.iter().map(|&(q, _)| q).collect();
    Ok(mcx_ladder(&controls, ins.target, true))
}

/// The bare rotation ladder for a 3-controlled X: 20 CNOTs and 16
/// single-qubit gates, equal to the exact gate except for a `-i` phase on
/// the fully-controlled block (it maps `|111>|t>` to `-i |111>|t^1>`).
pub fn decompose_c3not_budget(ins: &Instruction) -> Result<Vec<Instruction>> {
    require_positive_controls(ins, Some(3))?;
    let controls: Vec<usize> = ins.controls.iter().map(|&(q, _)| q).collect();
    Ok(mcx_ladder(&controls, ins.target, false))
}

/// Lowers an `n >= 3`-controlled X exactly via the gray-code ladder:
/// `3*2^n - 4` CNOTs and `3*2^n - 1` single-qubit gates.
///
/// With `verify` set, a compact instance of the same ladder is simulated
/// against the directly-constructed permutation; registers wider than
/// [`MAX_UNITARY_QUBITS`] are then rejected with a capacity error (pass
/// `verify = false` to lower them unchecked).
pub fn decompose_mcx(ins: &Instruction, verify: bool) -> Result<Vec<Instruction>> {
    require_positive_controls(ins, None)?;
    let n = ins.num_controls();
    if n < 3 {
        return Err(Error::Invalid(format!(
            "the ladder lowering needs at least 3 controls, got {n}"
        )));
    }
    if verify {
        verify_ladder(n)?;
    }
    let controls: Vec<usize> = ins.controls.iter().map(|&(q, _)| q).collect();
    Ok(mcx_ladder(&controls, ins.target, true))
}

/// Simulates a compact ladder instance against the permutation oracle.
fn verify_ladder(n: usize) -> Result<()> {
    let width = n + 1;
    if width > MAX_UNITARY_QUBITS {
        return Err(Error::Capacity {
            what: "ladder verification",
            required: 1 << width,
            cap: 1 << MAX_UNITARY_QUBITS,
        });
    }
    let compact: Vec<usize> = (1..=n).collect();
    let mut circuit = Circuit::new(width)?;
    for ins in mcx_ladder(&compact, 0, true) {
        circuit.push(ins)?;
    }
    let built = unitary_via_simulation(&circuit)?;
    let oracle = mcx_unitary(n, &vec![Polarity::Positive; n])?;
    let dist = dist_up_to_global_phase(&built, &oracle)?;
    if dist > EQUIV_TOL {
        return Err(Error::Verification {
            dist,
            tol: EQUIV_TOL,
        });
    }
    Ok(())
}

/// The gray-code ladder.
///
/// Walking the reflected gray sequence `S_k = k ^ (k >> 1)` visits every
/// non-empty subset of the controls once. Each visit applies a controlled
/// `RotX(±pi/2^n)` on the target (as a `RotY` pair inside the `RotZ(±pi/2)`
/// bracket) from an accumulator line holding that subset's parity, built by
/// one recoding CNOT per step. Signs alternate with subset size so the
/// rotation exponents telescope to a half-turn exactly on the all-ones
/// control block. With `corrections` set, a diagonal `T(±pi/2^n)` per visited
/// parity cancels the block's leftover `-i`.
fn mcx_ladder(controls: &[usize], target: usize, corrections: bool) -> Vec<Instruction> {
    let n = controls.len();
    debug_assert!(n >= 2);
    let theta = PI / (1usize << n) as f64;
    let mut out = Vec::with_capacity(6 << n);

    fn controlled_v(out: &mut Vec<Instruction>, line: usize, target: usize, angle: f64) {
        out.push(Instruction::single(GateKind::RotY(angle), target));
        out.push(Instruction::cnot(line, target));
        out.push(Instruction::single(GateKind::RotY(-angle), target));
        out.push(Instruction::cnot(line, target));
    }

    out.push(Instruction::single(GateKind::RotZ(FRAC_PI_2), target));
    if corrections {
        // singleton parities are the control lines themselves
        for &q in controls {
            out.push(Instruction::single(GateKind::TPhase(theta), q));
        }
    }
    controlled_v(&mut out, controls[0], target, theta);
    for k in 2..(1usize << n) {
        let s = k ^ (k >> 1);
        let s_prev = (k - 1) ^ ((k - 1) >> 1);
        let line = s.ilog2() as usize;
        let prev_line = s_prev.ilog2() as usize;
        let recode_src = if line == prev_line {
            (s ^ s_prev).ilog2() as usize
        } else {
            prev_line
        };
        out.push(Instruction::cnot(controls[recode_src], controls[line]));
        let sign = if s.count_ones() % 2 == 1 { 1.0 } else { -1.0 };
        if corrections && s.count_ones() > 1 {
            out.push(Instruction::single(
                GateKind::TPhase(sign * theta),
                controls[line],
            ));
        }
        controlled_v(&mut out, controls[line], target, sign * theta);
    }
    out.push(Instruction::single(GateKind::RotZ(-FRAC_PI_2), target));
    out
}
