//! Fast built-in sanity checks for the CLI's `selftest` subcommand.
//!
//! Each check is a named, deterministic assertion over a worked example
//! with a hand-computable answer. They finish in well under a second and
//! are meant to catch build or porting problems, not to replace the test
//! suite.

use crate::density::{miss_probability, uniform_miss_closed_form};
use crate::field::{Deployment, ScalingLaw, SpatialPdf};
use crate::geometry::{Interval, IntervalSet};
use crate::recovery::{localization_error, reconstruct_void, recovery_loss};
use crate::rng::StreamFactory;
use crate::runner::{run_trials, run_trials_sequential, TrialOutcome};
use crate::stats::{binomial_tail_ge, normal_cdf, normal_quantile};
use rand::Rng;

/// Result of one named check.
#[derive(Debug, Clone)]
pub struct SelfTestOutcome {
    pub name: &'static str,
    pub passed: bool,
    /// Human-readable expectation vs. observation.
    pub detail: String,
}

fn check(name: &'static str, passed: bool, detail: String) -> SelfTestOutcome {
    SelfTestOutcome { name, passed, detail }
}

/// Runs every check; order and names are stable.
pub fn run_selftest() -> Vec<SelfTestOutcome> {
    let mut out = Vec::new();

    {
        let a = Interval::new(0.1, 0.4).unwrap();
        let b = Interval::new(0.3, 0.6).unwrap();
        let set = IntervalSet::from_intervals(vec![a, b]);
        let m = set.measure();
        let c = set.complement().measure();
        out.push(check(
            "interval-union-measure",
            (m - 0.5).abs() < 1e-12 && (c - 0.5).abs() < 1e-12,
            format!("overlapping union measures {m}, complement {c}, both should be 0.5"),
        ));
    }

    {
        let p = normal_cdf(1.0);
        let q = normal_quantile(0.975);
        out.push(check(
            "normal-cdf-and-quantile",
            (p - 0.8413447460685429).abs() < 1e-12 && (q - 1.959963984540054).abs() < 1e-9,
            format!("Phi(1) = {p}, quantile(0.975) = {q}"),
        ));
    }

    {
        let t = binomial_tail_ge(5, 3, 0.5);
        out.push(check(
            "binomial-tail",
            (t - 0.5).abs() < 1e-12,
            format!("P(Bin(5, 0.5) >= 3) = {t}, should be 0.5"),
        ));
    }

    {
        let factory = StreamFactory::new(12345);
        let a: f64 = factory.stream(7).gen();
        let b: f64 = factory.stream(7).gen();
        let c: f64 = factory.stream(8).gen();
        out.push(check(
            "rng-streams",
            a == b && a != c,
            format!("stream 7 drew {a} then {b}; stream 8 drew {c}"),
        ));
    }

    {
        let sensors: Vec<f64> = vec![0.1, 0.3, 0.5, 0.7, 0.9];
        let txs: Vec<f64> = vec![0.5];
        let readings: Vec<bool> =
            sensors.iter().map(|&s| txs.iter().any(|&t| (s - t).abs() <= 0.1)).collect();
        let d = Deployment::new(txs, sensors, readings, 0.1, 0.0).unwrap();
        let loss = recovery_loss(&reconstruct_void(&d));
        out.push(check(
            "void-recovery-example",
            (loss - 0.2).abs() < 1e-12,
            format!("recovery loss {loss}, should be 0.2"),
        ));
    }

    {
        let e1 = localization_error(&[0.3], &[0.2, 0.9]);
        let e2 = localization_error(&[0.2, 0.7], &[0.25]);
        out.push(check(
            "localization-error-padding",
            (e1 - 1.0).abs() < 1e-12 && (e2 - 0.35).abs() < 1e-12,
            format!("padded errors {e1} and {e2}, should be 1 and 0.35"),
        ));
    }

    {
        let closed = uniform_miss_closed_form(50, 0.01);
        let quad = miss_probability(&SpatialPdf::Uniform, &SpatialPdf::Uniform, 50, 0.01)
            .unwrap_or(f64::NAN);
        out.push(check(
            "uniform-miss-quadrature",
            (closed - quad).abs() < 1e-9,
            format!("closed form {closed} vs quadrature {quad}"),
        ));
    }

    {
        let law = ScalingLaw::log_n_over_n(2.0);
        let v = law.evaluate(100);
        let want = 2.0 * 100f64.ln() / 100.0;
        out.push(check(
            "scaling-law-eval",
            (v - want).abs() < 1e-15,
            format!("2*log(n)/n at n=100 is {v}"),
        ));
    }

    {
        let factory = StreamFactory::new(4242);
        let trial = |_t: u64, rng: &mut rand_chacha::ChaCha8Rng| {
            let x: f64 = rng.gen();
            TrialOutcome { success: x < 0.25, metric: x }
        };
        let par = run_trials(&factory, 0, 5000, trial);
        let seq = run_trials_sequential(&factory, 0, 5000, trial);
        out.push(check(
            "runner-determinism",
            par == seq,
            format!(
                "parallel {}/{} sum {} vs sequential {}/{} sum {}",
                par.successes,
                par.trials,
                par.metric_sum,
                seq.successes,
                seq.trials,
                seq.metric_sum
            ),
        ));
    }

    out
}
