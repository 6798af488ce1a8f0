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

//! Rayon-parallel vs sequential Monte-Carlo sweep. The two paths produce
//! bitwise-identical rows (per-trial RNG streams), so this measures pure
//! scheduling overhead vs speedup.

use criterion::{criterion_group, criterion_main, Criterion};
use qwalk_core::experiments::{sweep, sweep_sequential, SweepConfig};
use qwalk_core::noise::SamplingMode;

fn bench_sweep(c: &mut Criterion) {
    let cfg = SweepConfig {
        num_qubits: 4,
        eps_grid: vec![1e-4, 1e-3],
        eps_low: 0.0,
        min_steps: 1,
        max_steps: 10,
        trials: 32,
        seed: 7,
        sampling: SamplingMode::FreshPerGate,
    };
    let mut group = c.benchmark_group("sweep_2x10x32");
    group.sample_size(10);
    group.bench_function("parallel", |b| b.iter(|| sweep(&cfg).unwrap()));
    group.bench_function("sequential", |b| b.iter(|| sweep_sequential(&cfg).unwrap()));
    group.finish();
}

criterion_group!(benches, bench_sweep);
criterion_main!(benches);
