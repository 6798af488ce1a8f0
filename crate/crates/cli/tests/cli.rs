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

//! End-to-end tests that drive the compiled `qwalk` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn qwalk(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qwalk"))
        .args(args)
        .output()
        .expect("spawn qwalk")
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "qwalk failed\nstdout: {}\nstderr: {}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).expect("utf-8 stdout")
}

#[test]
fn walk_one_step_splits_between_neighbors() {
    let out = stdout(&qwalk(&[
        "walk", "--qubits", "4", "--start", "0", "--coin", "0", "--steps", "1",
    ]));
    assert!(out.contains("0011: 0.5000000000"), "stdout: {out}");
    assert!(out.contains("1110: 0.5000000000"), "stdout: {out}");
    assert_eq!(out.lines().count(), 2, "stdout: {out}");
}

#[test]
fn emitted_walk_circuit_reproduces_the_walk() {
    let dir = tempfile::tempdir().unwrap();
    let circuit_path = dir.path().join("walk.qwc");
    let direct = stdout(&qwalk(&[
        "walk",
        "--qubits",
        "4",
        "--start",
        "5",
        "--steps",
        "3",
        "--emit-circuit",
        circuit_path.to_str().unwrap(),
    ]));
    // The emitted circuit bakes in the X preparation of |P_5>|0>, so
    // simulating it from |0...0> must reproduce the walk's distribution.
    let replay = stdout(&qwalk(&[
        "simulate",
        "--in",
        circuit_path.to_str().unwrap(),
        "--state",
        "0000",
    ]));
    assert_eq!(direct, replay);
}

#[test]
fn decompose_lowers_a_toffoli_to_six_cnots() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("toffoli.qwc");
    let output = dir.path().join("lowered.qwc");
    fs::write(&input, "qubits 3\nmcx 2:+ 1:+ 0\n").unwrap();
    let counts = stdout(&qwalk(&[
        "decompose",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
    ]));
    assert!(counts.contains("cnot=6"), "stdout: {counts}");

    // |110> must flip the target: the lowered circuit still computes CCX.
    let probs = stdout(&qwalk(&[
        "simulate",
        "--in",
        output.to_str().unwrap(),
        "--state",
        "110",
    ]));
    assert_eq!(probs.trim(), "111: 1.0000000000");
}

#[test]
fn sweep_is_reproducible_and_csv_shaped() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| -> String {
        let csv = dir.path().join(name);
        let note = stdout(&qwalk(&[
            "sweep",
            "--qubits",
            "3",
            "--eps-grid",
            "1e-3,1e-2",
            "--steps",
            "1..3",
            "--trials",
            "4",
            "--seed",
            "11",
            "--csv",
            csv.to_str().unwrap(),
        ]));
        assert!(note.contains("wrote 6 rows"), "stdout: {note}");
        fs::read_to_string(csv).unwrap()
    };
    let first = run("a.csv");
    let second = run("b.csv");
    assert_eq!(first, second, "same seed must give byte-identical CSV");
    assert_eq!(
        first.lines().next().unwrap(),
        "eps_scale,steps,trials,mean_fidelity,std_fidelity"
    );
    assert_eq!(first.lines().count(), 7);
}

#[test]
fn count_reports_the_lowered_walker_step() {
    let out = stdout(&qwalk(&["count", "--walker", "4"]));
    assert!(out.contains("cnot=54"), "stdout: {out}");
    assert!(out.contains("single_qubit=77"), "stdout: {out}");
}

#[test]
fn fidelity_reports_parseable_statistics() {
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("report.json");
    let out = stdout(&qwalk(&[
        "fidelity",
        "--qubits",
        "3",
        "--steps",
        "2",
        "--eps",
        "1e-3",
        "--trials",
        "8",
        "--json",
        json.to_str().unwrap(),
    ]));
    let mean_line = out
        .lines()
        .find(|l| l.starts_with("mean_fidelity="))
        .expect("mean_fidelity line");
    let mean: f64 = mean_line["mean_fidelity=".len()..].parse().unwrap();
    assert!((0.0..=1.0).contains(&mean), "mean {mean} out of range");

    let report: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(json).unwrap()).unwrap();
    assert_eq!(report["num_qubits"], 3);
    let per_input = report["per_input_fidelity"].as_array().unwrap();
    assert_eq!(per_input.len(), 4, "one entry per start position");
}

#[test]
fn usage_errors_exit_with_code_two() {
    let unknown_flag = qwalk(&["walk", "--does-not-exist"]);
    assert_eq!(unknown_flag.status.code(), Some(2));

    let missing_grid = qwalk(&["sweep", "--csv", "/tmp/out.csv"]);
    assert_eq!(missing_grid.status.code(), Some(2));
}

#[test]
fn runtime_errors_exit_with_code_one() {
    let missing_file = qwalk(&["simulate", "--in", "/no/such/file.qwc", "--state", "000"]);
    assert_eq!(missing_file.status.code(), Some(1));
    assert!(
        String::from_utf8_lossy(&missing_file.stderr).starts_with("error:"),
        "stderr: {}",
        String::from_utf8_lossy(&missing_file.stderr)
    );

    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("bell.qwc");
    fs::write(&input, "qubits 2\nh 1\ncnot 1 0\n").unwrap();
    let bad_state = qwalk(&[
        "simulate",
        "--in",
        input.to_str().unwrap(),
        "--state",
        "012",
    ]);
    assert_eq!(bad_state.status.code(), Some(1));
}

#[test]
fn decompose_passes_wide_gates_through_at_toffoli_level() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("c3x.qwc");
    let output = dir.path().join("lowered.qwc");
    fs::write(&input, "qubits 4\nmcx 3:+ 2:- 1:+ 0\n").unwrap();
    let counts = stdout(&qwalk(&[
        "decompose",
        "--in",
        input.to_str().unwrap(),
        "--out",
        output.to_str().unwrap(),
        "--level",
        "toffoli",
    ]));
    assert!(counts.contains("mcx[3]=1"), "stdout: {counts}");
    let text = fs::read_to_string(&output).unwrap();
    assert!(
        text.contains("mcx 3:+ 2:+ 1:+ 0"),
        "negative control must be rewritten, gate kept: {text}"
    );
    assert!(Path::new(&output).exists());
}
