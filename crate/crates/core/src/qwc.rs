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

//! Plain-text circuit format (`.qwc`).
//!
//! ```text
//! file    := header line*
//! header  := "qubits" INT
//! line    := blank | comment | instr
//! comment := "#" anything
//! instr   := "id" Q | "h" Q | "x" Q
//!          | "ry" Q ANGLE | "rz" Q ANGLE | "phase" Q ANGLE
//!          | "t" Q ANGLE | "u1" Q ANGLE
//!          | "u2" Q ANGLE ANGLE | "u3" Q ANGLE ANGLE ANGLE
//!          | "cnot" Q Q                      # control target
//!          | "mcx" ctrl+ Q                   # controls... target
//! ctrl    := Q ":" ("+" | "-")               # "-" fires on |0>
//! ```
//!
//! Angles are radians. [`emit_qwc`] is canonical: one instruction per line,
//! no comments, angles printed in the shortest form that re-parses to the
//! identical `f64`, and a single positive control on X always printed as
//! `cnot`. `parse(emit(c))` reproduces `c` exactly.

use crate::circuit::{Circuit, Instruction};
use crate::error::{Error, Result};
use crate::gates::{GateKind, Polarity};

/// Parses the text format; errors carry 1-based line numbers.
pub fn parse_qwc(text: &str) -> Result<Circuit> {
    let mut circuit: Option<Circuit> = None;
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let body = raw.trim();
        if body.is_empty() || body.starts_with('#') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        match circuit.as_mut() {
            None => {
                if toks.len() != 2 || toks[0] != "qubits" {
                    return Err(err(line, "expected header `qubits <n>`"));
                }
                let n: usize = toks[1]
                    .parse()
                    .map_err(|_| err(line, &format!("invalid qubit count `{}`", toks[1])))?;
                circuit = Some(Circuit::new(n).map_err(|e| err(line, &e.to_string()))?);
            }
            Some(c) => {
                let ins = parse_instruction(&toks, line)?;
                c.push(ins).map_err(|e| err(line, &e.to_string()))?;
            }
        }
    }
    circuit.ok_or_else(|| err(1, "missing `qubits <n>` header"))
}

fn err(line: usize, msg: &str) -> Error {
    Error::Parse {
        line,
        msg: msg.to_string(),
    }
}

fn parse_qubit(tok: &str, line: usize) -> Result<usize> {
    tok.parse()
        .map_err(|_| err(line, &format!("invalid qubit index `{tok}`")))
}

fn parse_angle(tok: &str, line: usize) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| err(line, &format!("invalid angle `{tok}`")))?;
    if !v.is_finite() {
        return Err(err(line, &format!("non-finite angle `{tok}`")));
    }
    Ok(v)
}

fn parse_instruction(toks: &[&str], line: usize) -> Result<Instruction> {
    let expect_args = |n: usize| -> Result<()> {
        if toks.len() != n + 1 {
            Err(err(
                line,
                &format!(
                    "`{}` takes {n} argument(s), got {}",
                    toks[0],
                    toks.len() - 1
                ),
            ))
        } else {
            Ok(())
        }
    };
    match toks[0] {
        "id" | "h" | "x" => {
            expect_args(1)?;
            let gate = match toks[0] {
                "id" => GateKind::Identity,
                "h" => GateKind::Hadamard,
                _ => GateKind::PauliX,
            };
            Ok(Instruction::single(gate, parse_qubit(toks[1], line)?))
        }
        "ry" | "rz" | "phase" | "t" | "u1" => {
            expect_args(2)?;
            let q = parse_qubit(toks[1], line)?;
            let a = parse_angle(toks[2], line)?;
            let gate = match toks[0] {
                "ry" => GateKind::RotY(a),
                "rz" => GateKind::RotZ(a),
                "phase" => GateKind::GlobalPhase(a),
                "t" => GateKind::TPhase(a),
                _ => GateKind::U1(a),
            };
            Ok(Instruction::single(gate, q))
        }
        "u2" => {
            expect_args(3)?;
            let q = parse_qubit(toks[1], line)?;
            let p = parse_angle(toks[2], line)?;
            let l = parse_angle(toks[3], line)?;
            Ok(Instruction::single(GateKind::U2(p, l), q))
        }
        "u3" => {
            expect_args(4)?;
            let q = parse_qubit(toks[1], line)?;
            let t = parse_angle(toks[2], line)?;
            let p = parse_angle(toks[3], line)?;
            let l = parse_angle(toks[4], line)?;
            Ok(Instruction::single(GateKind::U3(t, p, l), q))
        }
        "cnot" => {
            expect_args(2)?;
            Ok(Instruction::cnot(
                parse_qubit(toks[1], line)?,
                parse_qubit(toks[2], line)?,
            ))
        }
        "mcx" => {
            if toks.len() < 3 {
                return Err(err(line, "`mcx` needs at least one control and a target"));
            }
            let mut controls = Vec::with_capacity(toks.len() - 2);
            for tok in &toks[1..toks.len() - 1] {
                let (q, pol) = tok.split_once(':').ok_or_else(|| {
                    err(line, &format!("control `{tok}` must be `<q>:+` or `<q>:-`"))
                })?;
                let polarity = match pol {
                    "+" => Polarity::Positive,
                    "-" => Polarity::Negative,
                    _ => return Err(err(line, &format!("invalid polarity `{pol}`"))),
                };
                controls.push((parse_qubit(q, line)?, polarity));
            }
            let target = parse_qubit(toks[toks.len() - 1], line)?;
            Ok(Instruction::mcx(controls, target))
        }
        other => Err(err(line, &format!("unknown gate `{other}`"))),
    }
}

/// Emits the canonical text form of a circuit.
#[must_use]
pub fn emit_qwc(circuit: &Circuit) -> String {
    let mut out = format!("qubits {}\n", circuit.num_qubits());
    for ins in circuit.instructions() {
        emit_instruction(&mut out, ins);
    }
    out
}

fn emit_instruction(out: &mut String, ins: &Instruction) {
    use std::fmt::Write;
    if ins.controls.is_empty() {
        let mnemonic = ins.gate.mnemonic();
        write!(out, "{mnemonic} {}", ins.target).unwrap();
        for p in ins.gate.params() {
            // f64 Display is the shortest representation that round-trips
            write!(out, " {p}").unwrap();
        }
    } else if ins.is_cnot() {
        write!(out, "cnot {} {}", ins.controls[0].0, ins.target).unwrap();
    } else {
        out.push_str("mcx");
        for &(q, p) in &ins.controls {
            let sign = if p == Polarity::Positive { '+' } else { '-' };
            write!(out, " {q}:{sign}").unwrap();
        }
        write!(out, " {}", ins.target).unwrap();
    }
    out.push('\n');
}
