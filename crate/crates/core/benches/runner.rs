//! Benchmarks the Monte Carlo trial runner: the data-parallel path (when
//! the `parallel` feature is on) against the always-available sequential
//! fallback, on a representative whitespace-recovery workload. The two are
//! defined to produce bit-identical aggregates, so this measures scheduling
//! overhead and parallel speedup only.
//!
//! Run with `cargo bench -p wsim-core`; add `--no-default-features` to
//! benchmark the build without rayon (both groups then run sequentially).

use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use rand_chacha::ChaCha8Rng;
use wsim_core::field::place_transmitters;
use wsim_core::recovery::{reconstruct_void, recovery_loss};
use wsim_core::rng::StreamFactory;
use wsim_core::runner::{run_trials, run_trials_sequential, TrialOutcome};
use wsim_core::{Deployment, SpatialPdf};

/// One whitespace-recovery trial: deploy `n` sensors and one transmitter,
/// reconstruct the void, succeed when the lost measure stays below
/// `log(n)/n`. Mirrors the hot loop of the experiment harness.
fn whitespace_trial(n: usize, rng: &mut ChaCha8Rng) -> TrialOutcome {
    let r_s = (n as f64).ln() / n as f64;
    let txs = place_transmitters(1, 0.0, &SpatialPdf::Uniform, rng).expect("valid world");
    let d = Deployment::generate(txs, n, &SpatialPdf::Uniform, r_s, 0.0, rng).expect("valid world");
    let loss = recovery_loss(&reconstruct_void(&d));
    TrialOutcome { success: loss <= r_s, metric: loss }
}

fn bench_runner(c: &mut Criterion) {
    let factory = StreamFactory::new(1);
    let trials = 4096u64;
    let mut group = c.benchmark_group("whitespace_trials");
    group.sample_size(10);
    for n in [200usize, 1000] {
        group.bench_with_input(BenchmarkId::new("parallel", n), &n, |b, &n| {
            b.iter(|| run_trials(&factory, 0, trials, |_, rng| whitespace_trial(n, rng)))
        });
        group.bench_with_input(BenchmarkId::new("sequential", n), &n, |b, &n| {
            b.iter(|| run_trials_sequential(&factory, 0, trials, |_, rng| whitespace_trial(n, rng)))
        });
    }
    group.finish();
}

criterion_group!(benches, bench_runner);
criterion_main!(benches);
