//! Deterministic execution of independent Monte Carlo trials.
//!
//! Trials are pre-assigned RNG stream indices and grouped into fixed-size
//! batches. Batches run in parallel (with the `parallel` feature) or
//! sequentially, but per-batch partial sums are always combined in batch
//! order, so aggregate counts *and* floating-point metric sums are bit-equal
//! for every thread count, including the purely sequential build.

use crate::rng::StreamFactory;
use rand_chacha::ChaCha8Rng;

/// Trials per scheduling batch. Fixed: changing it would regroup the
/// floating-point metric summation and perturb results in the last bits.
const BATCH: u64 = 1024;

/// Outcome of a single trial: a success flag plus one scalar metric.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub success: bool,
    pub metric: f64,
}

/// Aggregated outcomes of a block of trials.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct TrialAggregate {
    pub trials: u64,
    pub successes: u64,
    pub metric_sum: f64,
}

impl TrialAggregate {
    fn absorb(&mut self, other: &TrialAggregate) {
        self.trials += other.trials;
        self.successes += other.successes;
        self.metric_sum += other.metric_sum;
    }

    pub fn success_rate(&self) -> f64 {
        self.successes as f64 / self.trials as f64
    }

    pub fn metric_mean(&self) -> f64 {
        self.metric_sum / self.trials as f64
    }
}

fn run_batch<F>(
    factory: &StreamFactory,
    stream_base: u64,
    lo: u64,
    hi: u64,
    trial: &F,
) -> TrialAggregate
where
    F: Fn(u64, &mut ChaCha8Rng) -> TrialOutcome,
{
    let mut agg = TrialAggregate::default();
    for t in lo..hi {
        let mut rng = factory.stream(stream_base + t);
        let out = trial(t, &mut rng);
        agg.trials += 1;
        agg.successes += out.success as u64;
        agg.metric_sum += out.metric;
    }
    agg
}

/// Runs `trials` trials sequentially. Always available; the parallel runner
/// is defined to agree with this bit-for-bit.
pub fn run_trials_sequential<F>(
    factory: &StreamFactory,
    stream_base: u64,
    trials: u64,
    trial: F,
) -> TrialAggregate
where
    F: Fn(u64, &mut ChaCha8Rng) -> TrialOutcome + Sync,
{
    let mut total = TrialAggregate::default();
    let mut lo = 0;
    while lo < trials {
        let hi = (lo + BATCH).min(trials);
        total.absorb(&run_batch(factory, stream_base, lo, hi, &trial));
        lo = hi;
    }
    total
}

/// Runs `trials` trials, in parallel when the `parallel` feature is
/// enabled. Trial `t` always draws from stream `stream_base + t`, and
/// batch partials are reduced in a fixed order, so results are identical
/// to [`run_trials_sequential`] regardless of worker count.
#[cfg(feature = "parallel")]
pub fn run_trials<F>(
    factory: &StreamFactory,
    stream_base: u64,
    trials: u64,
    trial: F,
) -> TrialAggregate
where
    F: Fn(u64, &mut ChaCha8Rng) -> TrialOutcome + Sync,
{
    use rayon::prelude::*;
    let batches = trials.div_ceil(BATCH);
    let partials: Vec<TrialAggregate> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let lo = b * BATCH;
            let hi = (lo + BATCH).min(trials);
            run_batch(factory, stream_base, lo, hi, &trial)
        })
        .collect();
    let mut total = TrialAggregate::default();
    for p in &partials {
        total.absorb(p);
    }
    total
}

#[cfg(not(feature = "parallel"))]
pub fn run_trials<F>(
    factory: &StreamFactory,
    stream_base: u64,
    trials: u64,
    trial: F,
) -> TrialAggregate
where
    F: Fn(u64, &mut ChaCha8Rng) -> TrialOutcome + Sync,
{
    run_trials_sequential(factory, stream_base, trials, trial)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn demo_trial(_t: u64, rng: &mut ChaCha8Rng) -> TrialOutcome {
        let x: f64 = rng.gen();
        TrialOutcome { success: x < 0.3, metric: x }
    }

    #[test]
    fn parallel_and_sequential_agree_bitwise() {
        let f = StreamFactory::new(99);
        let a = run_trials(&f, 0, 10_000, demo_trial);
        let b = run_trials_sequential(&f, 0, 10_000, demo_trial);
        assert_eq!(a.successes, b.successes);
        assert_eq!(a.metric_sum.to_bits(), b.metric_sum.to_bits());
    }

    #[cfg(feature = "parallel")]
    #[test]
    fn result_is_independent_of_worker_count() {
        let f = StreamFactory::new(7);
        let reference = run_trials_sequential(&f, 1 << 32, 5_000, demo_trial);
        for threads in [1usize, 4, 8] {
            let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
            let got = pool.install(|| run_trials(&f, 1 << 32, 5_000, demo_trial));
            assert_eq!(got.successes, reference.successes, "threads={threads}");
            assert_eq!(
                got.metric_sum.to_bits(),
                reference.metric_sum.to_bits(),
                "threads={threads}"
            );
        }
    }

    #[test]
    fn stream_base_shifts_the_sample() {
        let f = StreamFactory::new(7);
        let a = run_trials(&f, 0, 2_000, demo_trial);
        let b = run_trials(&f, 1 << 32, 2_000, demo_trial);
        assert_ne!(a.metric_sum.to_bits(), b.metric_sum.to_bits());
    }

    #[test]
    fn success_rate_of_rigged_bernoulli_is_close() {
        // p = 0.3 by construction of demo_trial
        let f = StreamFactory::new(123);
        let agg = run_trials(&f, 0, 100_000, demo_trial);
        let p = agg.success_rate();
        assert!((p - 0.3).abs() < 3.0 * (0.3f64 * 0.7 / 100_000.0).sqrt(), "p = {p}");
    }
}
