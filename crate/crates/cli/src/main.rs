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

//! `qwalk` — drive the cycle-walk simulator and CNOT-level transpiler from
//! the command line.
//!
//! Exit codes: 0 success, 1 runtime error (bad file, invalid parameters),
//! 2 usage error (clap).

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use qwalk_core::circuit::{count_gates, simulate, Circuit, GateCounts};
use qwalk_core::experiments::{fidelity_avg, rows_to_csv, sweep, SweepConfig};
use qwalk_core::kernel::{basis_label, StateVector};
use qwalk_core::noise::{NoiseConfig, SamplingMode};
use qwalk_core::qwc::{emit_qwc, parse_qwc};
use qwalk_core::transpile::{transpile_with, LoweringLevel, TranspileOptions};
use qwalk_core::walker::{build_walker_circuit, evolve_ideal, WalkerSpec};

#[derive(Parser)]
#[command(
    name = "qwalk",
    version,
    about = "Cycle quantum-walk simulator and CNOT-level transpiler"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Lower a circuit file toward the CNOT + single-qubit basis
    Decompose(DecomposeArgs),
    /// Apply a circuit file to a basis state and print outcome probabilities
    Simulate(SimulateArgs),
    /// Run the ideal walker and print outcome probabilities
    Walk(WalkArgs),
    /// Monte-Carlo fidelity of the noisy transpiled walker at one setting
    Fidelity(FidelityArgs),
    /// Fidelity sweep over an error grid and step range; writes CSV
    Sweep(SweepArgs),
    /// Print gate counts of a circuit file or of the lowered walker step
    Count(CountArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum LevelArg {
    /// Only eliminate negative controls
    Negctrl,
    /// Also lower 2-control X gates to the 6-CNOT network
    Toffoli,
    /// Lower everything to CNOT + single-qubit
    Cnot,
}

impl From<LevelArg> for LoweringLevel {
    fn from(level: LevelArg) -> Self {
        match level {
            LevelArg::Negctrl => LoweringLevel::EliminateNegativeControls,
            LevelArg::Toffoli => LoweringLevel::ToToffoli,
            LevelArg::Cnot => LoweringLevel::ToCnot,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum SamplingArg {
    /// Sample a fresh noisy matrix for every CNOT application
    Fresh,
    /// Sample once per trial and reuse the matrix
    Fixed,
}

impl From<SamplingArg> for SamplingMode {
    fn from(mode: SamplingArg) -> Self {
        match mode {
            SamplingArg::Fresh => SamplingMode::FreshPerGate,
            SamplingArg::Fixed => SamplingMode::FixedPerTrial,
        }
    }
}

#[derive(Args)]
struct DecomposeArgs {
    /// Input circuit file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Output circuit file
    #[arg(long, value_name = "FILE")]
    out: PathBuf,
    /// Lowering level
    #[arg(long, value_enum, default_value_t = LevelArg::Cnot)]
    level: LevelArg,
    /// Skip equivalence verification
    #[arg(long)]
    no_verify: bool,
}

#[derive(Args)]
struct SimulateArgs {
    /// Input circuit file
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Basis input as a bitstring, most significant qubit first
    #[arg(long, value_name = "BITS")]
    state: String,
    /// Also write every amplitude as JSON
    #[arg(long, value_name = "FILE")]
    amplitudes: Option<PathBuf>,
}

#[derive(Args)]
struct WalkArgs {
    /// Register width N (1 coin + N-1 position qubits)
    #[arg(long, default_value_t = 4)]
    qubits: usize,
    /// Starting position on the cycle
    #[arg(long)]
    start: usize,
    /// Initial coin bit
    #[arg(long, default_value_t = 0)]
    coin: u8,
    /// Number of walk steps
    #[arg(long)]
    steps: usize,
    /// Write the prepared circuit (X preparation + steps) to a file
    #[arg(long, value_name = "FILE")]
    emit_circuit: Option<PathBuf>,
    /// Also write every amplitude as JSON
    #[arg(long, value_name = "FILE")]
    amplitudes: Option<PathBuf>,
}

#[derive(Args)]
struct FidelityArgs {
    /// Register width N
    #[arg(long, default_value_t = 4)]
    qubits: usize,
    /// Number of walk steps
    #[arg(long)]
    steps: usize,
    /// Upper bound of the error-amplitude interval
    #[arg(long)]
    eps: f64,
    /// Lower bound of the interval
    #[arg(long, default_value_t = 0.0)]
    eps_low: f64,
    /// Monte-Carlo trials
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Noise sampling mode
    #[arg(long, value_enum, default_value_t = SamplingArg::Fresh)]
    sampling: SamplingArg,
    /// Write the full report as JSON
    #[arg(long, value_name = "FILE")]
    json: Option<PathBuf>,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("grid").required(true).args(["eps_grid", "eps_range"])
))]
struct SweepArgs {
    /// Register width N
    #[arg(long, default_value_t = 4)]
    qubits: usize,
    /// Comma-separated eps_scale grid
    #[arg(long, value_name = "E1,E2,...")]
    eps_grid: Option<String>,
    /// Log-spaced eps_scale grid
    #[arg(long, value_name = "LO..HI:N")]
    eps_range: Option<String>,
    /// Shared lower bound of the error-amplitude interval
    #[arg(long, default_value_t = 0.0)]
    eps_low: f64,
    /// Step range
    #[arg(long, default_value = "1..50", value_name = "MIN..MAX")]
    steps: String,
    /// Monte-Carlo trials per grid point
    #[arg(long, default_value_t = 100)]
    trials: usize,
    /// RNG seed
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Noise sampling mode
    #[arg(long, value_enum, default_value_t = SamplingArg::Fresh)]
    sampling: SamplingArg,
    /// Output CSV path
    #[arg(long, value_name = "FILE")]
    csv: PathBuf,
}

#[derive(Args)]
#[command(group(
    clap::ArgGroup::new("what").required(true).args(["walker", "input"])
))]
struct CountArgs {
    /// Count the fully lowered walker step for width N
    #[arg(long, value_name = "N")]
    walker: Option<usize>,
    /// Count a circuit file as-is
    #[arg(long = "in", value_name = "FILE")]
    input: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}

fn run(command: Command) -> Result<()> {
    match command {
        Command::Decompose(args) => cmd_decompose(&args),
        Command::Simulate(args) => cmd_simulate(&args),
        Command::Walk(args) => cmd_walk(&args),
        Command::Fidelity(args) => cmd_fidelity(&args),
        Command::Sweep(args) => cmd_sweep(&args),
        Command::Count(args) => cmd_count(&args),
    }
}

fn read_circuit(path: &Path) -> Result<Circuit> {
    let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_qwc(&text).with_context(|| format!("parsing {}", path.display()))
}

fn cmd_decompose(args: &DecomposeArgs) -> Result<()> {
    let circuit = read_circuit(&args.input)?;
    let lowered = transpile_with(
        &circuit,
        args.level.into(),
        TranspileOptions {
            verify: !args.no_verify,
        },
    )?;
    fs::write(&args.out, emit_qwc(&lowered))
        .with_context(|| format!("writing {}", args.out.display()))?;
    println!("{}", counts_line(&count_gates(&lowered)));
    Ok(())
}

fn cmd_simulate(args: &SimulateArgs) -> Result<()> {
    let circuit = read_circuit(&args.input)?;
    let index = parse_bitstring(&args.state, circuit.num_qubits())?;
    let input = StateVector::basis_state(circuit.num_qubits(), index)?;
    let output = simulate(&circuit, &input)?;
    print_outcomes(&output);
    if let Some(path) = &args.amplitudes {
        write_amplitudes(path, &output)?;
    }
    Ok(())
}

fn cmd_walk(args: &WalkArgs) -> Result<()> {
    let spec = WalkerSpec::new(args.qubits, args.start, args.coin, args.steps)?;
    let state = evolve_ideal(&spec)?;
    print_outcomes(&state);
    if let Some(path) = &args.emit_circuit {
        let circuit = build_walker_circuit(&spec)?;
        fs::write(path, emit_qwc(&circuit))
            .with_context(|| format!("writing {}", path.display()))?;
    }
    if let Some(path) = &args.amplitudes {
        write_amplitudes(path, &state)?;
    }
    Ok(())
}

fn cmd_fidelity(args: &FidelityArgs) -> Result<()> {
    let config = NoiseConfig::new(
        args.eps,
        args.eps_low,
        args.sampling.into(),
        args.seed,
        args.trials,
    )?;
    let report = fidelity_avg(args.qubits, args.steps, &config)?;
    println!("mean_fidelity={:.10}", report.mean_fidelity);
    println!("std_error={:.10}", report.std_error);
    for (k, f) in report.per_input_fidelity.iter().enumerate() {
        println!("per_input[{k}]={f:.10}");
    }
    if let Some(path) = &args.json {
        let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
        serde_json::to_writer_pretty(file, &report)?;
    }
    Ok(())
}

fn cmd_sweep(args: &SweepArgs) -> Result<()> {
    let eps_grid = match (&args.eps_grid, &args.eps_range) {
        (Some(list), None) => parse_eps_list(list)?,
        (None, Some(range)) => parse_eps_range(range)?,
        _ => unreachable!("clap group enforces exactly one"),
    };
    let (min_steps, max_steps) = parse_step_range(&args.steps)?;
    let config = SweepConfig {
        num_qubits: args.qubits,
        eps_grid,
        eps_low: args.eps_low,
        min_steps,
        max_steps,
        trials: args.trials,
        seed: args.seed,
        sampling: args.sampling.into(),
    };
    let rows = sweep(&config)?;
    fs::write(&args.csv, rows_to_csv(&rows))
        .with_context(|| format!("writing {}", args.csv.display()))?;
    println!("wrote {} rows to {}", rows.len(), args.csv.display());
    Ok(())
}

fn cmd_count(args: &CountArgs) -> Result<()> {
    let counts: GateCounts = match (&args.walker, &args.input) {
        (Some(width), None) => qwalk_core::experiments::walker_cnot_count(*width)?,
        (None, Some(path)) => count_gates(&read_circuit(path)?),
        _ => unreachable!("clap group enforces exactly one"),
    };
    println!("{}", counts_line(&counts));
    Ok(())
}

fn counts_line(counts: &GateCounts) -> String {
    use std::fmt::Write;
    let mut line = format!("cnot={} single_qubit={}", counts.cnot, counts.single_qubit);
    for (arity, n) in &counts.mcx_by_arity {
        write!(line, " mcx[{arity}]={n}").expect("write to string");
    }
    write!(line, " total={}", counts.total()).expect("write to string");
    line
}

fn parse_bitstring(bits: &str, width: usize) -> Result<usize> {
    if bits.len() != width {
        bail!(
            "state {bits:?} has {} bits, circuit has {width} qubits",
            bits.len()
        );
    }
    let mut index = 0usize;
    for ch in bits.chars() {
        index = match ch {
            '0' => index << 1,
            '1' => (index << 1) | 1,
            other => bail!("state must be a 0/1 bitstring, found {other:?}"),
        };
    }
    Ok(index)
}

fn print_outcomes(state: &StateVector) {
    for (idx, p) in state.probabilities().iter().enumerate() {
        if *p > 1e-12 {
            println!("{}: {:.10}", basis_label(state.num_qubits(), idx), p);
        }
    }
}

#[derive(Serialize)]
struct AmplitudeEntry {
    basis: String,
    re: f64,
    im: f64,
    probability: f64,
}

fn write_amplitudes(path: &Path, state: &StateVector) -> Result<()> {
    let entries: Vec<AmplitudeEntry> = state
        .amps()
        .iter()
        .enumerate()
        .map(|(idx, amp)| AmplitudeEntry {
            basis: basis_label(state.num_qubits(), idx),
            re: amp.re,
            im: amp.im,
            probability: amp.norm_sqr(),
        })
        .collect();
    let file = fs::File::create(path).with_context(|| format!("writing {}", path.display()))?;
    serde_json::to_writer_pretty(file, &entries)?;
    Ok(())
}

fn parse_eps_list(list: &str) -> Result<Vec<f64>> {
    list.split(',')
        .map(|tok| {
            tok.trim()
                .parse::<f64>()
                .with_context(|| format!("invalid eps value {tok:?}"))
        })
        .collect()
}

/// `LO..HI:N` — N log-spaced points from LO to HI inclusive.
fn parse_eps_range(range: &str) -> Result<Vec<f64>> {
    let (span, count) = range
        .rsplit_once(':')
        .context("eps range must look like LO..HI:N")?;
    let (lo, hi) = span
        .split_once("..")
        .context("eps range must look like LO..HI:N")?;
    let lo: f64 = lo.trim().parse().context("invalid range start")?;
    let hi: f64 = hi.trim().parse().context("invalid range end")?;
    let count: usize = count.trim().parse().context("invalid point count")?;
    if count == 0 {
        bail!("eps range needs at least one point");
    }
    if !lo.is_finite() || !hi.is_finite() || lo <= 0.0 || hi < lo {
        bail!("eps range needs finite 0 < LO <= HI for log spacing");
    }
    if count == 1 {
        return Ok(vec![lo]);
    }
    let ratio = (hi / lo).powf(1.0 / (count - 1) as f64);
    Ok((0..count).map(|i| lo * ratio.powi(i as i32)).collect())
}

fn parse_step_range(steps: &str) -> Result<(usize, usize)> {
    let (min, max) = steps
        .split_once("..")
        .context("step range must look like MIN..MAX")?;
    let min: usize = min.trim().parse().context("invalid minimum step count")?;
    let max: usize = max.trim().parse().context("invalid maximum step count")?;
    Ok((min, max))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bitstring_is_msb_first() {
        assert_eq!(parse_bitstring("1110", 4).unwrap(), 14);
        assert_eq!(parse_bitstring("0001", 4).unwrap(), 1);
        assert!(parse_bitstring("10", 3).is_err());
        assert!(parse_bitstring("10x", 3).is_err());
    }

    #[test]
    fn eps_range_is_log_spaced_inclusive() {
        let grid = parse_eps_range("1e-5..1e-2:4").unwrap();
        assert_eq!(grid.len(), 4);
        assert!((grid[0] - 1e-5).abs() < 1e-18);
        assert!((grid[1] - 1e-4).abs() < 1e-16);
        assert!((grid[2] - 1e-3).abs() < 1e-15);
        assert!((grid[3] - 1e-2).abs() < 1e-14);
        assert_eq!(parse_eps_range("1e-3..1e-3:1").unwrap(), vec![1e-3]);
        assert!(parse_eps_range("0..1e-2:4").is_err());
        assert!(parse_eps_range("1e-2..1e-3:4").is_err());
        assert!(parse_eps_range("nope").is_err());
    }

    #[test]
    fn step_range_parses() {
        assert_eq!(parse_step_range("1..50").unwrap(), (1, 50));
        assert_eq!(parse_step_range("5..5").unwrap(), (5, 5));
        assert!(parse_step_range("5").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
