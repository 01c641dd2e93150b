//! Simulation library for 1-D sensor fields on the unit segment.
//!
//! A field of `n` binary proximity sensors is scattered on `[0, 1]`; each
//! sensor reports whether some transmitter lies within its radio range
//! `r_s`, possibly corrupted by independent reading flips. From those bits
//! the library reconstructs the certified-idle region ("whitespace"),
//! localizes the transmitters, and studies how the recovery quality scales
//! with `n` under different radio-range laws and sensor densities.
//!
//! Modules:
//!
//! * [`geometry`] — closed intervals on `[0, 1]` and canonical disjoint
//!   unions of them (measure, union, complement).
//! * [`field`] — spatial densities, radio-range scaling laws, and random
//!   deployment sampling (sensors, transmitters, noisy readings).
//! * [`recovery`] — whitespace reconstruction from clean readings, grid
//!   majority decoding for noisy readings, and transmitter localization.
//! * [`density`] — the sensor-density optimization problem: which density
//!   of sensors minimizes the probability of missing a transmitter.
//! * [`harness`] — seeded, reproducible Monte Carlo experiments over
//!   `(n, law)` grids with CSV/JSON output.
//! * [`runner`] — the deterministic trial executor (parallel when the
//!   `parallel` feature is on; results do not depend on thread count).
//! * [`stats`] — small statistical helpers (Wilson interval, normal
//!   cdf/quantile, binomial tails).
//! * [`selftest`] — fast built-in checks wired to the CLI.

pub mod density;
pub mod error;
pub mod field;
pub mod geometry;
pub mod harness;
pub mod recovery;
pub mod rng;
pub mod runner;
pub mod selftest;
pub mod stats;

pub use error::{Error, Result};
pub use field::{Deployment, ScalingLaw, ScalingLawKind, SpatialPdf};
pub use geometry::{Interval, IntervalSet};
pub use harness::{ExperimentConfig, ExperimentKind, ExperimentResult};
pub use recovery::{DecodeGrid, LocalizationResult};
