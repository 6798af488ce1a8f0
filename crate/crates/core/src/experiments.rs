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

//! Monte-Carlo fidelity of the noisy transpiled walker against ideal
//! matrix-power evolution.
//!
//! One trial samples one noisy realization of every walk step — fresh CNOT
//! matrices per gate, or a single shared matrix in
//! [`SamplingMode::FixedPerTrial`] — and pushes all `2^(N-1)` basis start
//! positions through that same realization, recording
//! `|<ideal_m | noisy_m>|^2` for every step count `m` along the trajectory.
//!
//! Trials draw from independent streams of one ChaCha8 seed
//! (`set_stream(stream_id)`), so results are bitwise identical whether
//! trials run sequentially or on a rayon pool, at any thread count. The
//! `parallel` cargo feature (default-on) enables the rayon path;
//! [`sweep_sequential`] always runs single-threaded.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
#[cfg(feature = "parallel")]
use rayon::prelude::*;
use serde::Serialize;

use crate::circuit::{apply_single, GateCounts};
use crate::error::{Error, Result};
use crate::gates::gate_matrix;
use crate::kernel::{mat_apply, Complex, StateVector};
use crate::noise::{apply_noisy_cnot, sample_noisy_cnot, NoiseConfig, NoisyCnot, SamplingMode};
use crate::transpile::transpile_to_cnot;
use crate::walker::{build_walker_step, ideal_step_unitary, WalkerSpec};

/// Survival estimate for a circuit of `cnot_count` gates when each gate
/// independently succeeds with probability `1 - per_gate_error`:
/// `(1 - per_gate_error)^cnot_count`.
#[must_use]
pub fn success_prob_estimate(cnot_count: u32, per_gate_error: f64) -> f64 {
    (1.0 - per_gate_error).powi(cnot_count as i32)
}

/// Gate census of one fully-lowered walker step.
pub fn walker_cnot_count(num_qubits: usize) -> Result<GateCounts> {
    let lowered = transpile_to_cnot(&build_walker_step(num_qubits)?)?;
    Ok(crate::circuit::count_gates(&lowered))
}

/// Result of [`fidelity_avg`].
#[derive(Clone, Debug, Serialize)]
pub struct FidelityReport {
    pub num_qubits: usize,
    pub steps: usize,
    pub eps_scale: f64,
    pub eps_low: f64,
    pub sampling: SamplingMode,
    pub seed: u64,
    pub trials: usize,
    /// Mean fidelity per start position (trial-averaged), index = position.
    pub per_input_fidelity: Vec<f64>,
    /// Grand mean over all (start, trial) samples.
    pub mean_fidelity: f64,
    /// Sample standard deviation / sqrt(sample count).
    pub std_error: f64,
}

/// One row of a fidelity sweep.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    pub eps_scale: f64,
    pub steps: usize,
    pub trials: usize,
    pub mean_fidelity: f64,
    /// Sample standard deviation over the (start, trial) fidelities.
    pub std_fidelity: f64,
}

/// Parameters of [`sweep`].
#[derive(Clone, Debug)]
pub struct SweepConfig {
    /// Walker register width `N`.
    pub num_qubits: usize,
    /// Upper bounds of the error-amplitude interval, one grid point per
    /// value. Sorted and deduplicated before running; row order and RNG
    /// stream assignment follow the sorted grid.
    pub eps_grid: Vec<f64>,
    /// Shared lower bound of the interval.
    pub eps_low: f64,
    pub min_steps: usize,
    pub max_steps: usize,
    pub trials: usize,
    pub seed: u64,
    pub sampling: SamplingMode,
}

impl SweepConfig {
    fn validated_grid(&self) -> Result<Vec<f64>> {
        WalkerSpec::new(self.num_qubits, 0, 0, self.max_steps)?;
        if self.eps_grid.is_empty() {
            return Err(Error::Invalid("eps grid is empty".into()));
        }
        if self.min_steps == 0 || self.min_steps > self.max_steps {
            return Err(Error::Invalid(format!(
                "invalid step range {}..={}",
                self.min_steps, self.max_steps
            )));
        }
        if self.trials == 0 {
            return Err(Error::Invalid("trials must be at least 1".into()));
        }
        for &eps in &self.eps_grid {
            // reuse the full interval validation
            NoiseConfig::new(eps, self.eps_low, self.sampling, self.seed, self.trials)?;
        }
        let mut grid = self.eps_grid.clone();
        grid.sort_by(|a, b| a.partial_cmp(b).expect("finite eps"));
        grid.dedup();
        Ok(grid)
    }
}

/// Runs the sweep, parallel across trials when the `parallel` feature is on.
pub fn sweep(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep(config, cfg!(feature = "parallel"))
}

/// Same computation, forced single-threaded. Bitwise-identical output.
pub fn sweep_sequential(config: &SweepConfig) -> Result<Vec<SweepRow>> {
    run_sweep(config, false)
}

/// Monte-Carlo mean fidelity at one parameter point, averaged over all start
/// positions and trials. Uses the same estimator (and RNG streams) as the
/// corresponding [`sweep`] row.
pub fn fidelity_avg(
    num_qubits: usize,
    steps: usize,
    config: &NoiseConfig,
) -> Result<FidelityReport> {
    WalkerSpec::new(num_qubits, 0, 0, steps)?;
    if steps == 0 {
        return Err(Error::Invalid("steps must be at least 1".into()));
    }
    let kernel = StepKernel::build(num_qubits)?;
    let ideal = ideal_trajectories(num_qubits, steps)?;
    let results = map_trials(config.trials, cfg!(feature = "parallel"), |trial| {
        trial_fidelities(
            &kernel,
            &ideal,
            steps,
            config.eps_low,
            config.eps_scale,
            config.sampling,
            config.seed,
            stream_id(0, trial),
        )
    })?;
    let positions = 1usize << (num_qubits - 1);
    let mut per_input = vec![0.0f64; positions];
    for r in &results {
        for (k, f) in r[steps - 1].iter().enumerate() {
            per_input[k] += f;
        }
    }
    for f in &mut per_input {
        *f /= config.trials as f64;
    }
    let samples = collect_samples(&results, steps, positions);
    let (mean, std) = mean_and_std(&samples);
    Ok(FidelityReport {
        num_qubits,
        steps,
        eps_scale: config.eps_scale,
        eps_low: config.eps_low,
        sampling: config.sampling,
        seed: config.seed,
        trials: config.trials,
        per_input_fidelity: per_input,
        mean_fidelity: mean,
        std_error: std / (samples.len() as f64).sqrt(),
    })
}

/// Renders rows as CSV with 10-significant-digit floats.
#[must_use]
pub fn rows_to_csv(rows: &[SweepRow]) -> String {
    use std::fmt::Write;
    let mut out = String::from("eps_scale,steps,trials,mean_fidelity,std_fidelity\n");
    for r in rows {
        writeln!(
            out,
            "{:.9e},{},{},{:.9e},{:.9e}",
            r.eps_scale, r.steps, r.trials, r.mean_fidelity, r.std_fidelity
        )
        .expect("write to string");
    }
    out
}

fn run_sweep(config: &SweepConfig, parallel: bool) -> Result<Vec<SweepRow>> {
    let grid = config.validated_grid()?;
    let kernel = StepKernel::build(config.num_qubits)?;
    let ideal = ideal_trajectories(config.num_qubits, config.max_steps)?;
    let positions = 1usize << (config.num_qubits - 1);
    let mut rows = Vec::with_capacity(grid.len() * (config.max_steps - config.min_steps + 1));
    for (grid_index, &eps_scale) in grid.iter().enumerate() {
        let results = map_trials(config.trials, parallel, |trial| {
            trial_fidelities(
                &kernel,
                &ideal,
                config.max_steps,
                config.eps_low,
                eps_scale,
                config.sampling,
                config.seed,
                stream_id(grid_index, trial),
            )
        })?;
        for steps in config.min_steps..=config.max_steps {
            let samples = collect_samples(&results, steps, positions);
            let (mean, std) = mean_and_std(&samples);
            rows.push(SweepRow {
                eps_scale,
                steps,
                trials: config.trials,
                mean_fidelity: mean,
                std_fidelity: std,
            });
        }
    }
    Ok(rows)
}

/// Distinct RNG stream per (grid point, trial); identical in the parallel
/// and sequential paths.
fn stream_id(grid_index: usize, trial: u64) -> u64 {
    ((grid_index as u64) << 32) | trial
}

/// Flattens the per-trial fidelity tensors into (trial, position) order.
fn collect_samples(results: &[Vec<Vec<f64>>], steps: usize, positions: usize) -> Vec<f64> {
    let mut samples = Vec::with_capacity(results.len() * positions);
    for r in results {
        samples.extend_from_slice(&r[steps - 1]);
    }
    samples
}

/// Mean and n-1 sample standard deviation, in fixed summation order.
fn mean_and_std(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

fn map_trials<T, F>(trials: usize, parallel: bool, f: F) -> Result<Vec<T>>
where
    T: Send,
    F: Fn(u64) -> Result<T> + Sync + Send,
{
    #[cfg(feature = "parallel")]
    {
        if parallel {
            return (0..trials as u64).into_par_iter().map(f).collect();
        }
    }
    #[cfg(not(feature = "parallel"))]
    let _ = parallel;
    (0..trials as u64).map(f).collect()
}

/// One transpiled walk step flattened to cache-friendly ops.
struct StepKernel {
    num_qubits: usize,
    ops: Vec<Op>,
    cnot_count: usize,
}

enum Op {
    Single { target: usize, matrix: [Complex; 4] },
    Cnot { control: usize, target: usize },
}

impl StepKernel {
    fn build(num_qubits: usize) -> Result<Self> {
        let lowered = transpile_to_cnot(&build_walker_step(num_qubits)?)?;
        let mut ops = Vec::with_capacity(lowered.len());
        let mut cnot_count = 0;
        for ins in lowered.instructions() {
            if ins.controls.is_empty() {
                let g = gate_matrix(ins.gate);
                ops.push(Op::Single {
                    target: ins.target,
                    matrix: [g.get(0, 0), g.get(0, 1), g.get(1, 0), g.get(1, 1)],
                });
            } else {
                cnot_count += 1;
                ops.push(Op::Cnot {
                    control: ins.controls[0].0,
                    target: ins.target,
                });
            }
        }
        Ok(Self {
            num_qubits,
            ops,
            cnot_count,
        })
    }
}

/// Ideal states after 1..=max_steps steps for every basis start position
/// (coin 0), indexed `[step - 1][position]`.
fn ideal_trajectories(num_qubits: usize, max_steps: usize) -> Result<Vec<Vec<StateVector>>> {
    let u = ideal_step_unitary(num_qubits)?;
    let positions = 1usize << (num_qubits - 1);
    let mut current: Vec<StateVector> = (0..positions)
        .map(|k| StateVector::basis_state(num_qubits, 2 * k))
        .collect::<Result<_>>()?;
    let mut out = Vec::with_capacity(max_steps);
    for _ in 0..max_steps {
        current = current
            .iter()
            .map(|s| mat_apply(&u, s))
            .collect::<Result<_>>()?;
        out.push(current.clone());
    }
    Ok(out)
}

/// Runs one trial: every start position through the same noisy realization,
/// recording fidelities at each step count. Returns `[step - 1][position]`.
#[allow(clippy::too_many_arguments)]
fn trial_fidelities(
    kernel: &StepKernel,
    ideal: &[Vec<StateVector>],
    max_steps: usize,
    eps_low: f64,
    eps_scale: f64,
    sampling: SamplingMode,
    seed: u64,
    stream: u64,
) -> Result<Vec<Vec<f64>>> {
    let positions = 1usize << (kernel.num_qubits - 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    let fixed = match sampling {
        SamplingMode::FixedPerTrial => Some(sample_noisy_cnot(&mut rng, eps_low, eps_scale)?),
        SamplingMode::FreshPerGate => None,
    };
    let mut states: Vec<StateVector> = (0..positions)
        .map(|k| StateVector::basis_state(kernel.num_qubits, 2 * k))
        .collect::<Result<_>>()?;
    let mut fidelities = vec![vec![0.0f64; positions]; max_steps];
    let mut step_samples: Vec<NoisyCnot> = Vec::with_capacity(kernel.cnot_count);
    for m in 1..=max_steps {
        // the step's noise realization is drawn once and shared by every
        // start position, making the trial one consistent "noisy step"
        step_samples.clear();
        if fixed.is_none() {
            for _ in 0..kernel.cnot_count {
                step_samples.push(sample_noisy_cnot(&mut rng, eps_low, eps_scale)?);
            }
        }
        for (k, state) in states.iter_mut().enumerate() {
            let mut next_sample = 0;
            for op in &kernel.ops {
                match op {
                    Op::Single { target, matrix } => apply_single(state, matrix, *target),
                    Op::Cnot { control, target } => {
                        let gate = match &fixed {
                            Some(g) => g,
                            None => {
                                let g = &step_samples[next_sample];
                                next_sample += 1;
                                g
                            }
                        };
                        apply_noisy_cnot(state, gate, *control, *target);
                    }
                }
            }
            fidelities[m - 1][k] = ideal[m - 1][k].overlap_prob(state)?;
        }
    }
    Ok(fidelities)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn success_prob_matches_frozen_values() {
        assert!((success_prob_estimate(87, 0.0138) - 0.2985072).abs() < 1e-6);
        assert!((success_prob_estimate(54, 0.0138) - 0.4721825).abs() < 1e-6);
        assert_eq!(success_prob_estimate(0, 0.5), 1.0);
        assert_eq!(success_prob_estimate(10, 0.0), 1.0);
    }

    #[test]
    fn walker_cnot_counts_by_width() {
        let c4 = walker_cnot_count(4).unwrap();
        assert_eq!(c4.cnot, 54);
        assert_eq!(c4.single_qubit, 77);
        assert!(c4.mcx_by_arity.is_empty());
        assert_eq!(walker_cnot_count(3).unwrap().cnot, 14);
        assert_eq!(walker_cnot_count(2).unwrap().cnot, 2);
    }

    fn small_config() -> SweepConfig {
        SweepConfig {
            num_qubits: 3,
            eps_grid: vec![1e-2, 1e-3],
            eps_low: 0.0,
            min_steps: 1,
            max_steps: 3,
            trials: 5,
            seed: 11,
            sampling: SamplingMode::FreshPerGate,
        }
    }

    #[test]
    fn sweep_rows_are_sorted_and_complete() {
        let rows = sweep(&small_config()).unwrap();
        assert_eq!(rows.len(), 6);
        // eps ascending, then steps ascending
        let expect: Vec<(f64, usize)> = vec![
            (1e-3, 1),
            (1e-3, 2),
            (1e-3, 3),
            (1e-2, 1),
            (1e-2, 2),
            (1e-2, 3),
        ];
        for (row, (eps, steps)) in rows.iter().zip(expect) {
            assert_eq!(row.eps_scale, eps);
            assert_eq!(row.steps, steps);
            assert_eq!(row.trials, 5);
            assert!(row.mean_fidelity > 0.0 && row.mean_fidelity <= 1.0 + 1e-12);
            assert!(row.std_fidelity >= 0.0);
        }
    }

    #[test]
    fn parallel_and_sequential_sweeps_are_bitwise_equal() {
        let cfg = small_config();
        let a = sweep(&cfg).unwrap();
        let b = sweep_sequential(&cfg).unwrap();
        assert_eq!(a, b);
        // and repeat runs are stable
        let c = sweep(&cfg).unwrap();
        assert_eq!(a, c);
    }

    #[test]
    fn fidelity_avg_matches_the_corresponding_sweep_row() {
        let cfg = small_config();
        let rows = sweep_sequential(&cfg).unwrap();
        // single-point grid shares stream ids with grid index 0
        let point = NoiseConfig::new(1e-3, 0.0, SamplingMode::FreshPerGate, 11, 5).unwrap();
        let report = fidelity_avg(3, 2, &point).unwrap();
        let row = rows
            .iter()
            .find(|r| r.eps_scale == 1e-3 && r.steps == 2)
            .unwrap();
        assert_eq!(report.mean_fidelity, row.mean_fidelity);
        assert_eq!(report.per_input_fidelity.len(), 4);
        let se_from_row = row.std_fidelity / ((5.0f64 * 4.0).sqrt());
        assert_eq!(report.std_error, se_from_row);
    }

    #[test]
    fn zero_noise_gives_unit_fidelity() {
        let cfg = NoiseConfig::new(0.0, 0.0, SamplingMode::FreshPerGate, 3, 2).unwrap();
        let report = fidelity_avg(4, 5, &cfg).unwrap();
        assert!(
            (report.mean_fidelity - 1.0).abs() < 1e-10,
            "mean was {}",
            report.mean_fidelity
        );
        for f in &report.per_input_fidelity {
            assert!((f - 1.0).abs() < 1e-10);
        }
        assert!(report.std_error < 1e-10);
    }

    #[test]
    fn fixed_sampling_differs_from_fresh() {
        let fresh = NoiseConfig::new(1e-2, 0.0, SamplingMode::FreshPerGate, 5, 4).unwrap();
        let fixed = NoiseConfig::new(1e-2, 0.0, SamplingMode::FixedPerTrial, 5, 4).unwrap();
        let a = fidelity_avg(3, 3, &fresh).unwrap();
        let b = fidelity_avg(3, 3, &fixed).unwrap();
        assert_ne!(a.mean_fidelity, b.mean_fidelity);
    }

    #[test]
    fn csv_has_the_stable_header_and_digit_count() {
        let rows = vec![SweepRow {
            eps_scale: 1e-2,
            steps: 7,
            trials: 3,
            mean_fidelity: 0.9980015,
            std_fidelity: 0.001234,
        }];
        let csv = rows_to_csv(&rows);
        let mut lines = csv.lines();
        assert_eq!(
            lines.next().unwrap(),
            "eps_scale,steps,trials,mean_fidelity,std_fidelity"
        );
        assert_eq!(
            lines.next().unwrap(),
            "1.000000000e-2,7,3,9.980015000e-1,1.234000000e-3"
        );
        assert!(lines.next().is_none());
    }

    #[test]
    fn config_validation_rejects_bad_ranges() {
        let mut cfg = small_config();
        cfg.eps_grid.clear();
        assert!(sweep_sequential(&cfg).is_err());
        let mut cfg = small_config();
        cfg.min_steps = 4;
        assert!(sweep_sequential(&cfg).is_err());
        let mut cfg = small_config();
        cfg.trials = 0;
        assert!(sweep_sequential(&cfg).is_err());
        let mut cfg = small_config();
        cfg.eps_low = 0.5; // exceeds both grid points
        assert!(sweep_sequential(&cfg).is_err());
    }
}
