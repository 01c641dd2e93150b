//! Random sensor fields on the unit segment.
//!
//! This module owns the probabilistic model: spatial densities from which
//! sensor and transmitter positions are drawn ([`SpatialPdf`]), the radio
//! range / tolerance scaling laws compared by the experiments
//! ([`ScalingLaw`]), and the assembled world ([`Deployment`]) of transmitter
//! positions, sensor positions, and (possibly flipped) binary readings.

use crate::error::{Error, Result};
use crate::stats::{normal_cdf, normal_pdf, normal_quantile};
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

// ======================================================================
// spatial densities
// ======================================================================

/// A probability density on `[0, 1]`.
///
/// `Tabulated` holds density values on a uniform grid over `[0, 1]`
/// (including both endpoints) and is interpreted piecewise-linearly; its
/// trapezoidal integral must be 1 within `1e-6`. Sampling uses the exact
/// inverse cdf of that piecewise-linear interpolant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum SpatialPdf {
    Uniform,
    /// The symmetric triangular density: `4x` on `[0, 1/2)`, `4(1-x)` on
    /// `[1/2, 1]`.
    Triangular,
    TruncatedGaussian {
        mean: f64,
        std_dev: f64,
    },
    Tabulated {
        values: Vec<f64>,
    },
}

impl SpatialPdf {
    /// Density value at `x` in `[0, 1]`.
    pub fn density(&self, x: f64) -> f64 {
        match self {
            SpatialPdf::Uniform => 1.0,
            SpatialPdf::Triangular => {
                if x < 0.5 {
                    4.0 * x
                } else {
                    4.0 * (1.0 - x)
                }
            }
            SpatialPdf::TruncatedGaussian { mean, std_dev } => {
                let z = (x - mean) / std_dev;
                normal_pdf(z) / (std_dev * truncated_gaussian_mass(*mean, *std_dev))
            }
            SpatialPdf::Tabulated { values } => {
                let k = values.len() - 1;
                let pos = (x * k as f64).clamp(0.0, k as f64);
                let i = (pos.floor() as usize).min(k - 1);
                let t = pos - i as f64;
                values[i] * (1.0 - t) + values[i + 1] * t
            }
        }
    }

    /// Checks that the variant describes a usable density.
    pub fn validate(&self) -> Result<()> {
        match self {
            SpatialPdf::Uniform | SpatialPdf::Triangular => Ok(()),
            SpatialPdf::TruncatedGaussian { mean, std_dev } => {
                if !mean.is_finite() || !std_dev.is_finite() || *std_dev <= 0.0 {
                    return Err(Error::InvalidArgument(format!(
                        "truncated gaussian needs finite mean and positive std_dev, got ({mean}, {std_dev})"
                    )));
                }
                Ok(())
            }
            SpatialPdf::Tabulated { values } => {
                if values.len() < 2 {
                    return Err(Error::InvalidArgument(
                        "tabulated pdf needs at least two grid values".into(),
                    ));
                }
                if values.iter().any(|v| !v.is_finite() || *v < 0.0) {
                    return Err(Error::InvalidArgument(
                        "tabulated pdf values must be finite and non-negative".into(),
                    ));
                }
                let total = trapezoid_mass(values);
                if (total - 1.0).abs() > 1e-6 {
                    return Err(Error::InvalidArgument(format!(
                        "tabulated pdf integrates to {total}, not 1 (tolerance 1e-6)"
                    )));
                }
                Ok(())
            }
        }
    }

    /// Prepares a sampler; precomputes the cumulative table for tabulated
    /// densities so repeated draws stay cheap.
    pub fn sampler(&self) -> PdfSampler<'_> {
        match self {
            SpatialPdf::Uniform => PdfSampler::Uniform,
            SpatialPdf::Triangular => PdfSampler::Triangular,
            SpatialPdf::TruncatedGaussian { mean, std_dev } => {
                let a = normal_cdf((0.0 - mean) / std_dev);
                let b = normal_cdf((1.0 - mean) / std_dev);
                PdfSampler::TruncatedGaussian {
                    mean: *mean,
                    std_dev: *std_dev,
                    cdf_lo: a,
                    cdf_span: b - a,
                }
            }
            SpatialPdf::Tabulated { values } => {
                // cumulative trapezoidal mass at each node, normalized to 1
                let k = values.len() - 1;
                let h = 1.0 / k as f64;
                let mut cum = Vec::with_capacity(values.len());
                cum.push(0.0);
                for i in 0..k {
                    cum.push(cum[i] + 0.5 * h * (values[i] + values[i + 1]));
                }
                let total = cum[k];
                for c in cum.iter_mut() {
                    *c /= total;
                }
                PdfSampler::Tabulated { values, cum, total }
            }
        }
    }

    /// Draws one value; convenience wrapper around [`SpatialPdf::sampler`].
    pub fn sample_one(&self, rng: &mut ChaCha8Rng) -> f64 {
        self.sampler().sample(rng)
    }

    /// Short identifier used in CSV output.
    pub fn label(&self) -> String {
        match self {
            SpatialPdf::Uniform => "uniform".into(),
            SpatialPdf::Triangular => "triangular".into(),
            SpatialPdf::TruncatedGaussian { mean, std_dev } => {
                format!("trunc_gauss(m={mean};s={std_dev})")
            }
            SpatialPdf::Tabulated { values } => format!("tabulated[{}]", values.len()),
        }
    }
}

/// Total mass that the untruncated normal with the given parameters places
/// on `[0, 1]`; the normalizer of the truncated density.
fn truncated_gaussian_mass(mean: f64, std_dev: f64) -> f64 {
    normal_cdf((1.0 - mean) / std_dev) - normal_cdf((0.0 - mean) / std_dev)
}

/// Trapezoidal integral of uniformly gridded values over `[0, 1]`.
pub(crate) fn trapezoid_mass(values: &[f64]) -> f64 {
    let k = values.len() - 1;
    let h = 1.0 / k as f64;
    let mut sum = 0.5 * (values[0] + values[k]);
    for v in &values[1..k] {
        sum += v;
    }
    sum * h
}

/// Reusable sampling state for one [`SpatialPdf`].
pub enum PdfSampler<'a> {
    Uniform,
    Triangular,
    TruncatedGaussian { mean: f64, std_dev: f64, cdf_lo: f64, cdf_span: f64 },
    Tabulated { values: &'a [f64], cum: Vec<f64>, total: f64 },
}

impl PdfSampler<'_> {
    /// Inverse-cdf draw.
    pub fn sample(&self, rng: &mut ChaCha8Rng) -> f64 {
        let u: f64 = rng.gen();
        match self {
            PdfSampler::Uniform => u,
            PdfSampler::Triangular => {
                if u < 0.5 {
                    (u / 2.0).sqrt()
                } else {
                    1.0 - ((1.0 - u) / 2.0).sqrt()
                }
            }
            PdfSampler::TruncatedGaussian { mean, std_dev, cdf_lo, cdf_span } => {
                let target = (cdf_lo + u * cdf_span).clamp(1e-300, 1.0 - 1e-16);
                (mean + std_dev * normal_quantile(target)).clamp(0.0, 1.0)
            }
            PdfSampler::Tabulated { values, cum, total } => {
                // locate the grid segment holding mass u, then invert the
                // quadratic cumulative of the linear density on that segment
                let k = values.len() - 1;
                let h = 1.0 / k as f64;
                let seg = cum.partition_point(|&c| c < u).saturating_sub(1).min(k - 1);
                // remaining mass past the segment start, in raw density units
                let rest = (u - cum[seg]).max(0.0) * total;
                let t = invert_segment_mass(values[seg], values[seg + 1], h, rest);
                ((seg as f64 + t) * h).clamp(0.0, 1.0)
            }
        }
    }
}

/// Solves `h * (f0 * t + (f1 - f0) * t^2 / 2) = mass` for `t` in `[0, 1]`.
fn invert_segment_mass(f0: f64, f1: f64, h: f64, mass: f64) -> f64 {
    let u = mass / h;
    let slope = f1 - f0;
    let t = if slope.abs() < 1e-12 * (f0.abs() + f1.abs() + 1e-300) {
        if f0 > 0.0 {
            u / f0
        } else {
            0.0
        }
    } else {
        let disc = (f0 * f0 + 2.0 * slope * u).max(0.0);
        (disc.sqrt() - f0) / slope
    };
    t.clamp(0.0, 1.0)
}

// ======================================================================
// scaling laws
// ======================================================================

/// Functional forms for radio range, tolerance, or cell width as functions
/// of the sensor count `n`. Logarithms are natural.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ScalingLawKind {
    LogNOverN,
    LogNOverNSquared,
    SqrtLogNOverN,
    Constant,
}

/// A scaling law `coefficient * shape(n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ScalingLaw {
    pub kind: ScalingLawKind,
    #[serde(default = "default_coefficient")]
    pub coefficient: f64,
}

fn default_coefficient() -> f64 {
    1.0
}

impl ScalingLaw {
    pub fn new(kind: ScalingLawKind, coefficient: f64) -> Self {
        ScalingLaw { kind, coefficient }
    }

    pub fn log_n_over_n(coefficient: f64) -> Self {
        ScalingLaw::new(ScalingLawKind::LogNOverN, coefficient)
    }

    /// The law evaluated at sensor count `n`.
    pub fn evaluate(&self, n: usize) -> f64 {
        let n = n as f64;
        let base = n.ln() / n;
        self.coefficient
            * match self.kind {
                ScalingLawKind::LogNOverN => base,
                ScalingLawKind::LogNOverNSquared => base * base,
                ScalingLawKind::SqrtLogNOverN => base.sqrt(),
                ScalingLawKind::Constant => 1.0,
            }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.coefficient.is_finite() || self.coefficient <= 0.0 {
            return Err(Error::InvalidConfig(format!(
                "scaling-law coefficient must be positive, got {}",
                self.coefficient
            )));
        }
        Ok(())
    }

    /// Short identifier used in CSV output.
    pub fn label(&self) -> String {
        let c = self.coefficient;
        match self.kind {
            ScalingLawKind::LogNOverN => format!("{c}*log(n)/n"),
            ScalingLawKind::LogNOverNSquared => format!("{c}*(log(n)/n)^2"),
            ScalingLawKind::SqrtLogNOverN => format!("{c}*sqrt(log(n)/n)"),
            ScalingLawKind::Constant => format!("{c}"),
        }
    }
}

// ======================================================================
// distances and placement
// ======================================================================

/// Distance on the circle obtained by identifying the endpoints of the unit
/// segment. Used by the single-transmitter miss experiments, where it keeps
/// detection probability position-independent for uniform fields.
pub fn circular_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).abs();
    d.min(1.0 - d)
}

/// Draws `n` sensor positions i.i.d. from `pdf`.
pub fn sample_sensors(n: usize, pdf: &SpatialPdf, rng: &mut ChaCha8Rng) -> Vec<f64> {
    let sampler = pdf.sampler();
    (0..n).map(|_| sampler.sample(rng)).collect()
}

const MAX_PLACEMENT_ROUNDS: usize = 100_000;

/// Places `count` transmitters i.i.d. from `pdf`, redrawing the whole set
/// until every adjacent pair is at least `min_separation` apart. Returns
/// the positions sorted ascending.
pub fn place_transmitters(
    count: usize,
    min_separation: f64,
    pdf: &SpatialPdf,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<f64>> {
    if !min_separation.is_finite() || min_separation < 0.0 {
        return Err(Error::InvalidArgument(format!("negative min_separation {min_separation}")));
    }
    if count == 0 {
        return Ok(Vec::new());
    }
    if count > 1 && (count - 1) as f64 * min_separation >= 1.0 {
        return Err(Error::InfeasibleSeparation { count, min_separation });
    }
    let sampler = pdf.sampler();
    let mut txs = Vec::with_capacity(count);
    for _ in 0..MAX_PLACEMENT_ROUNDS {
        txs.clear();
        for _ in 0..count {
            txs.push(sampler.sample(rng));
        }
        txs.sort_by(|a, b| a.partial_cmp(b).expect("samples are finite"));
        let ok = txs.windows(2).all(|w| w[1] - w[0] >= min_separation);
        if ok {
            return Ok(txs);
        }
    }
    Err(Error::InfeasibleSeparation { count, min_separation })
}

/// Validates an explicit transmitter list: all in `[0, 1]`, and adjacent
/// separations at least `min_separation`. Returns the sorted list.
pub fn validate_transmitters(mut txs: Vec<f64>, min_separation: f64) -> Result<Vec<f64>> {
    if txs.iter().any(|t| !t.is_finite() || !(0.0..=1.0).contains(t)) {
        return Err(Error::InvalidArgument("transmitter position outside [0, 1]".into()));
    }
    txs.sort_by(|a, b| a.partial_cmp(b).expect("positions are finite"));
    if txs.windows(2).any(|w| w[1] - w[0] < min_separation) {
        return Err(Error::InvalidArgument(format!(
            "transmitter separation below required minimum {min_separation}"
        )));
    }
    Ok(txs)
}

/// Binary readings: sensor `i` cleanly reads 1 iff some transmitter lies
/// within `radio_range` (segment distance, endpoints inclusive); with
/// `flip_prob > 0` each reading is then flipped independently with that
/// probability. `transmitters` must be sorted ascending.
pub fn generate_readings(
    sensors: &[f64],
    transmitters: &[f64],
    radio_range: f64,
    flip_prob: f64,
    rng: &mut ChaCha8Rng,
) -> Vec<bool> {
    let mut out = Vec::with_capacity(sensors.len());
    for &s in sensors {
        let clean = nearest_distance(transmitters, s).is_some_and(|d| d <= radio_range);
        let observed = if flip_prob > 0.0 { clean ^ rng.gen_bool(flip_prob) } else { clean };
        out.push(observed);
    }
    out
}

/// Distance from `x` to the nearest element of the sorted slice, `None` if
/// the slice is empty.
fn nearest_distance(sorted: &[f64], x: f64) -> Option<f64> {
    if sorted.is_empty() {
        return None;
    }
    let idx = sorted.partition_point(|&t| t < x);
    let mut best = f64::INFINITY;
    if idx < sorted.len() {
        best = best.min((sorted[idx] - x).abs());
    }
    if idx > 0 {
        best = best.min((x - sorted[idx - 1]).abs());
    }
    Some(best)
}

// ======================================================================
// deployments
// ======================================================================

/// A fully instantiated world: transmitters, sensors, ranges, and readings.
#[derive(Debug, Clone, PartialEq)]
pub struct Deployment {
    tx_locations: Vec<f64>,
    sensor_locations: Vec<f64>,
    readings: Vec<bool>,
    radio_range: f64,
    flip_prob: f64,
    /// `(seed, stream)` pair recorded when the world came from a seeded
    /// generator, for reproducibility reports.
    origin: Option<(u64, u64)>,
}

impl Deployment {
    /// Assembles and validates a world from explicit parts. Transmitters
    /// are sorted; sensors keep their draw order (grid decoding depends on
    /// it for tie-breaking).
    pub fn new(
        tx_locations: Vec<f64>,
        sensor_locations: Vec<f64>,
        readings: Vec<bool>,
        radio_range: f64,
        flip_prob: f64,
    ) -> Result<Self> {
        if !radio_range.is_finite() || radio_range <= 0.0 {
            return Err(Error::InvalidArgument(format!(
                "radio range must be positive, got {radio_range}"
            )));
        }
        if !(0.0..0.5).contains(&flip_prob) {
            return Err(Error::InvalidArgument(format!(
                "flip probability must lie in [0, 0.5), got {flip_prob}"
            )));
        }
        if readings.len() != sensor_locations.len() {
            return Err(Error::InvalidArgument(format!(
                "{} readings for {} sensors",
                readings.len(),
                sensor_locations.len()
            )));
        }
        if sensor_locations.iter().any(|s| !s.is_finite() || !(0.0..=1.0).contains(s)) {
            return Err(Error::InvalidArgument("sensor position outside [0, 1]".into()));
        }
        let tx_locations = validate_transmitters(tx_locations, 0.0)?;
        Ok(Deployment {
            tx_locations,
            sensor_locations,
            readings,
            radio_range,
            flip_prob,
            origin: None,
        })
    }

    /// Samples sensors from `sensor_pdf` and generates readings for the
    /// given transmitters.
    pub fn generate(
        tx_locations: Vec<f64>,
        n_sensors: usize,
        sensor_pdf: &SpatialPdf,
        radio_range: f64,
        flip_prob: f64,
        rng: &mut ChaCha8Rng,
    ) -> Result<Self> {
        let tx_locations = validate_transmitters(tx_locations, 0.0)?;
        let sensors = sample_sensors(n_sensors, sensor_pdf, rng);
        let readings = generate_readings(&sensors, &tx_locations, radio_range, flip_prob, rng);
        Deployment::new(tx_locations, sensors, readings, radio_range, flip_prob)
    }

    pub fn with_origin(mut self, seed: u64, stream: u64) -> Self {
        self.origin = Some((seed, stream));
        self
    }

    pub fn transmitters(&self) -> &[f64] {
        &self.tx_locations
    }

    pub fn sensors(&self) -> &[f64] {
        &self.sensor_locations
    }

    pub fn readings(&self) -> &[bool] {
        &self.readings
    }

    pub fn radio_range(&self) -> f64 {
        self.radio_range
    }

    pub fn flip_prob(&self) -> f64 {
        self.flip_prob
    }

    pub fn origin(&self) -> Option<(u64, u64)> {
        self.origin
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::StreamFactory;

    fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
        StreamFactory::new(seed).stream(stream)
    }

    #[test]
    fn triangular_sample_mean_matches_analytic_mean() {
        // mean = 1/2, var = 1/24; 100k draws, 3-sigma band
        let mut r = rng(11, 0);
        let xs = sample_sensors(100_000, &SpatialPdf::Triangular, &mut r);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let band = 3.0 * (1.0f64 / 24.0 / 100_000.0).sqrt();
        assert!((mean - 0.5).abs() < band, "mean = {mean}, band = {band}");
        assert!(xs.iter().all(|&x| (0.0..=1.0).contains(&x)));
    }

    #[test]
    fn truncated_gaussian_interval_mass_matches_cdf() {
        // P(0.25 <= X <= 0.75) for mean .5, sd .25 truncated to [0, 1]
        let pdf = SpatialPdf::TruncatedGaussian { mean: 0.5, std_dev: 0.25 };
        let mut r = rng(12, 0);
        let xs = sample_sensors(100_000, &pdf, &mut r);
        let frac =
            xs.iter().filter(|&&x| (0.25..=0.75).contains(&x)).count() as f64 / xs.len() as f64;
        let want = 0.7152327720109061;
        let band = 3.0 * (want * (1.0 - want) / 100_000.0f64).sqrt();
        assert!((frac - want).abs() < band, "frac = {frac}, want = {want}");
    }

    #[test]
    fn truncated_gaussian_density_matches_reference() {
        let pdf = SpatialPdf::TruncatedGaussian { mean: 0.5, std_dev: 0.25 };
        assert!((pdf.density(0.5) - 1.6718382009405384).abs() < 1e-12);
        assert!((pdf.density(0.0) - 0.2262586964500768).abs() < 1e-12);
    }

    #[test]
    fn tabulated_pdf_interpolates_and_samples() {
        // tabulate the triangular density exactly on a 101-node grid
        let values: Vec<f64> = (0..=100)
            .map(|i| {
                let x = i as f64 / 100.0;
                SpatialPdf::Triangular.density(x)
            })
            .collect();
        let tab = SpatialPdf::Tabulated { values };
        tab.validate().unwrap();
        assert!((tab.density(0.25) - 1.0).abs() < 1e-12);
        assert!((tab.density(0.5) - 2.0).abs() < 1e-12);
        let mut r = rng(13, 0);
        let xs = sample_sensors(100_000, &tab, &mut r);
        let mean = xs.iter().sum::<f64>() / xs.len() as f64;
        let band = 3.0 * (1.0f64 / 24.0 / 100_000.0).sqrt();
        assert!((mean - 0.5).abs() < band, "mean = {mean}");
    }

    #[test]
    fn tabulated_pdf_rejects_bad_normalization() {
        let tab = SpatialPdf::Tabulated { values: vec![2.0, 2.0, 2.0] };
        assert!(tab.validate().is_err());
        let tab = SpatialPdf::Tabulated { values: vec![1.0, -0.5, 1.0] };
        assert!(tab.validate().is_err());
    }

    #[test]
    fn reading_flip_rate_matches_flip_probability() {
        // no transmitters: every 1 is a flip
        let mut r = rng(14, 0);
        let sensors = sample_sensors(100_000, &SpatialPdf::Uniform, &mut r);
        let readings = generate_readings(&sensors, &[], 0.05, 0.3, &mut r);
        let rate = readings.iter().filter(|&&b| b).count() as f64 / readings.len() as f64;
        let band = 3.0 * (0.3f64 * 0.7 / 100_000.0).sqrt();
        assert!((rate - 0.3).abs() < band, "rate = {rate}");
    }

    #[test]
    fn clean_readings_match_brute_force_pairs() {
        for world in 0..1000u64 {
            let mut r = rng(15, world);
            let n = 1 + (r.gen::<u64>() % 40) as usize;
            let m = (r.gen::<u64>() % 4) as usize;
            let rs = 0.01 + 0.2 * r.gen::<f64>();
            let sensors = sample_sensors(n, &SpatialPdf::Uniform, &mut r);
            let txs = place_transmitters(m, 0.0, &SpatialPdf::Uniform, &mut r).unwrap();
            let got = generate_readings(&sensors, &txs, rs, 0.0, &mut r);
            for (i, &s) in sensors.iter().enumerate() {
                let want = txs.iter().any(|&t| (s - t).abs() <= rs);
                assert_eq!(got[i], want, "world {world}, sensor {i}");
            }
        }
    }

    #[test]
    fn first_transmitter_follows_min_order_statistic() {
        // smallest of 4 uniforms ~ Beta(1, 4): F(x) = 1 - (1 - x)^4;
        // Kolmogorov statistic below the 99.73% critical value
        const T: usize = 100_000;
        let mut r = rng(16, 0);
        let mut firsts: Vec<f64> = (0..T)
            .map(|_| place_transmitters(4, 0.0, &SpatialPdf::Uniform, &mut r).unwrap()[0])
            .collect();
        firsts.sort_by(|a, b| a.partial_cmp(b).unwrap());
        let mut d: f64 = 0.0;
        for (i, &x) in firsts.iter().enumerate() {
            let f = 1.0 - (1.0 - x).powi(4);
            let lo = i as f64 / T as f64;
            let hi = (i + 1) as f64 / T as f64;
            d = d.max((f - lo).abs()).max((f - hi).abs());
        }
        let stat = (T as f64).sqrt() * d;
        assert!(stat < 1.817642798251569, "sqrt(T)*D = {stat}");
    }

    #[test]
    fn placement_respects_min_separation() {
        let mut r = rng(17, 0);
        for _ in 0..200 {
            let txs = place_transmitters(4, 0.12, &SpatialPdf::Uniform, &mut r).unwrap();
            assert!(txs.windows(2).all(|w| w[1] - w[0] >= 0.12));
        }
    }

    #[test]
    fn infeasible_separation_is_rejected() {
        let mut r = rng(18, 0);
        let err = place_transmitters(5, 0.3, &SpatialPdf::Uniform, &mut r).unwrap_err();
        assert!(matches!(err, Error::InfeasibleSeparation { .. }));
        assert!(err.is_config());
    }

    #[test]
    fn deployment_is_bit_identical_for_same_seed() {
        let make = || {
            let mut r = rng(19, 5);
            let txs = place_transmitters(2, 0.0, &SpatialPdf::Uniform, &mut r).unwrap();
            Deployment::generate(txs, 500, &SpatialPdf::Uniform, 0.02, 0.1, &mut r).unwrap()
        };
        let a = make();
        let b = make();
        assert_eq!(a, b);
    }

    #[test]
    fn scaling_laws_decay_monotonically_from_three() {
        // log(n)/n peaks at n = e, so monotonicity starts at n = 3
        let kinds = [
            ScalingLawKind::LogNOverN,
            ScalingLawKind::LogNOverNSquared,
            ScalingLawKind::SqrtLogNOverN,
        ];
        for kind in kinds {
            let law = ScalingLaw::new(kind, 2.5);
            // doubling grid plus every adjacent pair along it
            let mut n = 3usize;
            while n < 10_000_000 {
                assert!(law.evaluate(n + 1) < law.evaluate(n), "{kind:?} rose at n = {}", n + 1);
                let next_n = (n * 2).min(10_000_000);
                assert!(law.evaluate(next_n) < law.evaluate(n), "{kind:?} rose by n = {next_n}");
                n = next_n;
            }
            assert!(law.evaluate(10_000_000) > 0.0);
        }
        let c = ScalingLaw::new(ScalingLawKind::Constant, 0.25);
        assert_eq!(c.evaluate(10), 0.25);
        assert_eq!(c.evaluate(10_000), 0.25);
    }

    #[test]
    fn scaling_law_serde_roundtrip() {
        let law = ScalingLaw::new(ScalingLawKind::SqrtLogNOverN, 2.0);
        let json = serde_json::to_string(&law).unwrap();
        let back: ScalingLaw = serde_json::from_str(&json).unwrap();
        assert_eq!(law, back);
        let parsed: ScalingLaw = serde_json::from_str(r#"{"kind":"log_n_over_n"}"#).unwrap();
        assert_eq!(parsed.coefficient, 1.0);
    }

    #[test]
    fn spatial_pdf_serde_roundtrip() {
        let pdfs = vec![
            SpatialPdf::Uniform,
            SpatialPdf::Triangular,
            SpatialPdf::TruncatedGaussian { mean: 0.5, std_dev: 0.25 },
            SpatialPdf::Tabulated { values: vec![1.0, 1.0] },
        ];
        let json = serde_json::to_string(&pdfs).unwrap();
        let back: Vec<SpatialPdf> = serde_json::from_str(&json).unwrap();
        assert_eq!(pdfs, back);
    }

    #[test]
    fn circular_distance_wraps() {
        assert!((circular_distance(0.02, 0.98) - 0.04).abs() < 1e-15);
        assert!((circular_distance(0.3, 0.4) - 0.1).abs() < 1e-15);
        assert_eq!(circular_distance(0.5, 0.5), 0.0);
    }
}
