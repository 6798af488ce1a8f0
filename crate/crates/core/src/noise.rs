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

//! Probabilistic-CNOT error model.
//!
//! A noisy CNOT replaces the ideal 4x4 permutation with a real matrix whose
//! columns each keep the ideal unit entry, demoted to
//! `beta = sqrt(1 - sum_of_3 eps^2)`, and spread the remainder over three
//! error amplitudes `eps` drawn uniformly from `[eps_low, eps_scale]`. In the
//! `|control target>` basis the layout is
//!
//! ```text
//!         |00>    |01>    |10>    |11>
//! |00>  [ b1      e4      e7      e10 ]
//! |01>  [ e1      b2      e8      e11 ]
//! |10>  [ e2      e5      e9      b4  ]
//! |11>  [ e3      e6      b3      e12 ]
//! ```
//!
//! Every column has unit norm but the matrix as a whole is not unitary, so
//! the state is renormalized after each noisy gate — skipped when the norm is
//! already within [`RENORM_EPS`](crate::RENORM_EPS) of 1, which keeps a run
//! at `eps = 0` bitwise identical to the ideal simulator.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::circuit::{is_cnot_basis, Circuit};
use crate::error::{Error, Result};
use crate::kernel::{Complex, SquareMatrix, StateVector};
use crate::RENORM_EPS;

/// When fresh error amplitudes are drawn.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SamplingMode {
    /// Every noisy CNOT application samples a new matrix.
    FreshPerGate,
    /// One matrix is sampled per trial and reused for every CNOT in it.
    FixedPerTrial,
}

/// Validated parameters of the error model.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct NoiseConfig {
    pub eps_scale: f64,
    pub eps_low: f64,
    pub sampling: SamplingMode,
    pub seed: u64,
    pub trials: usize,
}

impl NoiseConfig {
    pub fn new(
        eps_scale: f64,
        eps_low: f64,
        sampling: SamplingMode,
        seed: u64,
        trials: usize,
    ) -> Result<Self> {
        if !(0.0..=1.0).contains(&eps_low) || !(0.0..=1.0).contains(&eps_scale) {
            return Err(Error::Invalid(format!(
                "eps bounds must lie in [0, 1], got [{eps_low}, {eps_scale}]"
            )));
        }
        if eps_low > eps_scale {
            return Err(Error::Invalid(format!(
                "eps_low {eps_low} exceeds eps_scale {eps_scale}"
            )));
        }
        if trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        Ok(Self {
            eps_scale,
            eps_low,
            sampling,
            seed,
            trials,
        })
    }

    /// Degenerate interval `[eps, eps]`: every error amplitude equals `eps`.
    pub fn fixed_eps(eps: f64, sampling: SamplingMode, seed: u64, trials: usize) -> Result<Self> {
        Self::new(eps, eps, sampling, seed, trials)
    }
}

/// One sampled noisy-CNOT matrix.
#[derive(Clone, Debug)]
pub struct NoisyCnot {
    /// The twelve error amplitudes `e1..e12` in layout order.
    pub eps: [f64; 12],
    /// Per-column ideal-entry weights `b1..b4`.
    pub beta: [f64; 4],
    /// Row-major 4x4 matrix in the `|control target>` basis.
    entries: [f64; 16],
}

impl NoisyCnot {
    #[must_use]
    pub fn matrix(&self) -> SquareMatrix {
        let mut m = SquareMatrix::zeros(4);
        for row in 0..4 {
            for col in 0..4 {
                m.set(row, col, Complex::new(self.entries[row * 4 + col], 0.0));
            }
        }
        m
    }

    #[inline]
    pub(crate) fn entries(&self) -> &[f64; 16] {
        &self.entries
    }
}

/// Draws `e1..e12` uniformly from `[eps_low, eps_scale]` and assembles the
/// matrix. Fails with [`Error::NoiseWeight`] if any column's error weight
/// reaches 1 (beta would be imaginary).
pub fn sample_noisy_cnot<R: Rng>(rng: &mut R, eps_low: f64, eps_scale: f64) -> Result<NoisyCnot> {
    let span = eps_scale - eps_low;
    let mut eps = [0.0f64; 12];
    for e in &mut eps {
        *e = eps_low + rng.gen::<f64>() * span;
    }
    build_noisy_cnot(eps)
}

/// Assembles the matrix from explicit error amplitudes (column layout as in
/// the module docs: `e1..e3` under `b1`, `e4..e6` around `b2`, ...).
pub fn build_noisy_cnot(eps: [f64; 12]) -> Result<NoisyCnot> {
    // (row, col) position of each error amplitude, in e1..e12 order
    const EPS_POS: [(usize, usize); 12] = [
        (1, 0),
        (2, 0),
        (3, 0), // e1..e3: column |00>
        (0, 1),
        (2, 1),
        (3, 1), // e4..e6: column |01>
        (0, 2),
        (1, 2),
        (2, 2), // e7..e9: column |10>
        (0, 3),
        (1, 3),
        (3, 3), // e10..e12: column |11>
    ];
    // the ideal CNOT's unit entry per column, demoted to beta
    const BETA_POS: [(usize, usize); 4] = [(0, 0), (1, 1), (3, 2), (2, 3)];

    let mut entries = [0.0f64; 16];
    let mut beta = [0.0f64; 4];
    for col in 0..4 {
        let weight: f64 = (0..3).map(|i| eps[col * 3 + i] * eps[col * 3 + i]).sum();
        if weight >= 1.0 {
            return Err(Error::NoiseWeight {
                column: col + 1,
                weight,
            });
        }
        beta[col] = (1.0 - weight).sqrt();
        let (br, bc) = BETA_POS[col];
        entries[br * 4 + bc] = beta[col];
    }
    for (i, &(r, c)) in EPS_POS.iter().enumerate() {
        entries[r * 4 + c] = eps[i];
    }
    Ok(NoisyCnot { eps, beta, entries })
}

/// Applies a sampled noisy CNOT in place on the `(control, target)` pair and
/// renormalizes unless the norm is already within [`RENORM_EPS`] of 1.
pub(crate) fn apply_noisy_cnot(
    state: &mut StateVector,
    gate: &NoisyCnot,
    control: usize,
    target: usize,
) {
    let m = gate.entries();
    let cbit = 1usize << control;
    let tbit = 1usize << target;
    let dim = state.dim();
    let amps = state.amps_mut();
    let mut norm_sq = 0.0f64;
    for idx in 0..dim {
        if idx & (cbit | tbit) != 0 {
            continue;
        }
        // basis order within the block: |c t> = 00, 01, 10, 11
        let i00 = idx;
        let i01 = idx | tbit;
        let i10 = idx | cbit;
        let i11 = idx | cbit | tbit;
        let a = [amps[i00], amps[i01], amps[i10], amps[i11]];
        for (k, &slot) in [i00, i01, i10, i11].iter().enumerate() {
            let row = 4 * k;
            let v = a[0] * m[row] + a[1] * m[row + 1] + a[2] * m[row + 2] + a[3] * m[row + 3];
            norm_sq += v.norm_sqr();
            amps[slot] = v;
        }
    }
    if (norm_sq - 1.0).abs() > RENORM_EPS {
        let inv = 1.0 / norm_sq.sqrt();
        for a in amps {
            *a *= inv;
        }
    }
}

/// Runs a CNOT-basis circuit with every CNOT replaced by a sampled noisy
/// matrix; single-qubit gates stay ideal. Equivalent to
/// [`simulate_noisy_trial`] with trial 0.
pub fn simulate_noisy(
    circuit: &Circuit,
    input: &StateVector,
    config: &NoiseConfig,
) -> Result<StateVector> {
    simulate_noisy_trial(circuit, input, config, 0)
}

/// One noisy run on the RNG stream `trial`, so independent trials draw
/// independent (and thread-schedule-independent) noise.
pub fn simulate_noisy_trial(
    circuit: &Circuit,
    input: &StateVector,
    config: &NoiseConfig,
    trial: u64,
) -> Result<StateVector> {
    if !is_cnot_basis(circuit) {
        return Err(Error::NotCnotBasis(
            "lower the circuit with the full pipeline first".into(),
        ));
    }
    if input.num_qubits() != circuit.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: 1 << circuit.num_qubits(),
            got: input.dim(),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    rng.set_stream(trial);
    let fixed = match config.sampling {
        SamplingMode::FixedPerTrial => Some(sample_noisy_cnot(
            &mut rng,
            config.eps_low,
            config.eps_scale,
        )?),
        SamplingMode::FreshPerGate => None,
    };
    let mut state = input.clone();
    for ins in circuit.instructions() {
        if ins.controls.is_empty() {
            crate::circuit::apply_instruction(&mut state, ins);
        } else {
            let control = ins.controls[0].0;
            match &fixed {
                Some(gate) => apply_noisy_cnot(&mut state, gate, control, ins.target),
                None => {
                    let gate = sample_noisy_cnot(&mut rng, config.eps_low, config.eps_scale)?;
                    apply_noisy_cnot(&mut state, &gate, control, ins.target);
                }
            }
        }
    }
    Ok(state)
}
