//! Reconstruction algorithms on top of a [`Deployment`]: free-spectrum
//! (void) recovery from clean or noisy readings, grid-cell majority
//! decoding, and transmitter localization with its error metric.

use crate::error::{Error, Result};
use crate::field::Deployment;
use crate::geometry::{Interval, IntervalSet};

// ======================================================================
// clean-reading reconstructions
// ======================================================================

/// Region declared transmitter-free: the union of radius-`radio_range`
/// intervals (clipped to `[0, 1]`) around every sensor that read 0.
///
/// With clean readings a 0 certifies no transmitter within `radio_range`
/// of the sensor, so this region can never cover a transmitter.
pub fn reconstruct_void(d: &Deployment) -> IntervalSet {
    reading_intervals(d, false)
}

/// Region declared occupied: the union of radius-`radio_range` intervals
/// (clipped) around every sensor that read 1.
pub fn reconstruct_occupied(d: &Deployment) -> IntervalSet {
    reading_intervals(d, true)
}

fn reading_intervals(d: &Deployment, wanted: bool) -> IntervalSet {
    let rs = d.radio_range();
    let ivs: Vec<Interval> = d
        .sensors()
        .iter()
        .zip(d.readings())
        .filter(|&(_, &r)| r == wanted)
        .map(|(&s, _)| Interval::clipped(s, rs).expect("sensor positions are valid centers"))
        .collect();
    IntervalSet::from_intervals(ivs)
}

/// Fraction of the segment the declared void fails to claim.
pub fn recovery_loss(void_estimate: &IntervalSet) -> f64 {
    1.0 - void_estimate.measure()
}

// ======================================================================
// grid majority decoding
// ======================================================================

/// One grid cell's tally and verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeCell {
    pub index: usize,
    pub lo: f64,
    pub hi: f64,
    /// Sensors whose position falls in the cell.
    pub sensor_count: usize,
    /// How many of them read 1.
    pub ones_count: usize,
    /// Votes actually counted; with an even sensor count the vote of the
    /// cell's last-drawn sensor is discarded to force an odd electorate.
    pub voting_count: usize,
    pub voting_ones: usize,
    /// `true` when the counted 1s strictly outnumber the counted 0s.
    /// Cells with no votes default to `false` (declared free).
    pub verdict: bool,
}

/// Per-cell majority verdicts over a uniform grid on `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct DecodeGrid {
    cells: Vec<DecodeCell>,
    cell_width: f64,
}

/// Tallies readings per cell of width `cell_width` (the last cell is
/// clipped at 1) and takes a strict-majority vote in each.
///
/// Cells with an even number of sensors drop the vote of the sensor that
/// appears last in the deployment's draw order, so every vote is decided
/// by an odd electorate and ties cannot occur.
pub fn majority_decode(d: &Deployment, cell_width: f64) -> Result<DecodeGrid> {
    if !cell_width.is_finite() || cell_width <= 0.0 || cell_width > 1.0 {
        return Err(Error::InvalidArgument(format!(
            "decode cell width must lie in (0, 1], got {cell_width}"
        )));
    }
    let num_cells = (1.0 / cell_width).ceil() as usize;
    let mut cells: Vec<DecodeCell> = (0..num_cells)
        .map(|k| DecodeCell {
            index: k,
            lo: k as f64 * cell_width,
            hi: ((k + 1) as f64 * cell_width).min(1.0),
            sensor_count: 0,
            ones_count: 0,
            voting_count: 0,
            voting_ones: 0,
            verdict: false,
        })
        .collect();
    // last reading seen per cell, in draw order; that vote is the one
    // discarded when the cell's count comes out even
    let mut last_reading = vec![false; num_cells];
    for (&s, &r) in d.sensors().iter().zip(d.readings()) {
        let k = ((s / cell_width).floor() as usize).min(num_cells - 1);
        cells[k].sensor_count += 1;
        cells[k].ones_count += r as usize;
        last_reading[k] = r;
    }
    for cell in cells.iter_mut() {
        cell.voting_count = cell.sensor_count;
        cell.voting_ones = cell.ones_count;
        if cell.sensor_count > 0 && cell.sensor_count % 2 == 0 {
            cell.voting_count -= 1;
            cell.voting_ones -= last_reading[cell.index] as usize;
        }
        cell.verdict = 2 * cell.voting_ones > cell.voting_count;
    }
    Ok(DecodeGrid { cells, cell_width })
}

impl DecodeGrid {
    pub fn cells(&self) -> &[DecodeCell] {
        &self.cells
    }

    pub fn cell_width(&self) -> f64 {
        self.cell_width
    }

    /// Union of the cells whose verdict is "free"; adjacent cells merge.
    pub fn void_estimate(&self) -> IntervalSet {
        self.span_union(false)
    }

    /// Union of the cells whose verdict is "present".
    pub fn occupied_estimate(&self) -> IntervalSet {
        self.span_union(true)
    }

    fn span_union(&self, verdict: bool) -> IntervalSet {
        let ivs: Vec<Interval> = self
            .cells
            .iter()
            .filter(|c| c.verdict == verdict)
            .map(|c| Interval::new(c.lo, c.hi.min(1.0)).expect("cell spans are valid"))
            .collect();
        IntervalSet::from_intervals(ivs)
    }
}

// ======================================================================
// localization
// ======================================================================

/// Output of [`localize`]: position estimates (ascending) and the occupied
/// regions they were derived from.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalizationResult {
    pub estimates: Vec<f64>,
    pub regions: IntervalSet,
}

/// Estimates transmitter positions from an occupied-region reconstruction.
///
/// With `decode_cell_width = None` the occupied region is taken directly
/// from the 1-readings (requires noise-free readings); with `Some(w)` it
/// comes from the majority verdicts of a width-`w` grid. Each contiguous
/// occupied region of width `w` then contributes
/// `k = max(floor(w / (2 * radio_range)), 1)` estimates placed at the
/// centers of `k` equal subdivisions.
pub fn localize(d: &Deployment, decode_cell_width: Option<f64>) -> Result<LocalizationResult> {
    let regions = match decode_cell_width {
        None => {
            if d.flip_prob() > 0.0 {
                return Err(Error::InvalidArgument(
                    "readings are noisy; localization needs a decode cell width".into(),
                ));
            }
            reconstruct_occupied(d)
        }
        Some(w) => majority_decode(d, w)?.occupied_estimate(),
    };
    let rs = d.radio_range();
    let mut estimates = Vec::new();
    for iv in regions.intervals() {
        let w = iv.width();
        let k = ((w / (2.0 * rs)).floor() as usize).max(1);
        for j in 1..=k {
            estimates.push(iv.lo() + (j as f64 - 0.5) * w / k as f64);
        }
    }
    Ok(LocalizationResult { estimates, regions })
}

/// Total mismatch between true and estimated transmitter lists.
///
/// Both lists are sorted ascending and compared index-by-index; if the
/// counts differ, the true list is padded at the tail with 0s or the
/// estimate list with 1s until the lengths match, so every spurious or
/// missed transmitter is charged its full distance to a segment endpoint.
pub fn localization_error(truth: &[f64], estimates: &[f64]) -> f64 {
    let mut t = truth.to_vec();
    let mut e = estimates.to_vec();
    t.sort_by(|a, b| a.partial_cmp(b).expect("positions are finite"));
    e.sort_by(|a, b| a.partial_cmp(b).expect("positions are finite"));
    while t.len() < e.len() {
        t.push(0.0);
    }
    while e.len() < t.len() {
        e.push(1.0);
    }
    t.iter().zip(&e).map(|(a, b)| (a - b).abs()).sum()
}

// ======================================================================
// partitioned cell localizer
// ======================================================================

/// Localizer for well-separated transmitters on clean readings, with one
/// estimate per coarse cell.
///
/// The segment is cut into cells of width `10 * cell_coeff * ln(n) / n`
/// (so the radio range, validated to equal `cell_coeff * ln(n) / n`, is a
/// tenth of a cell). Each cell's outer tenths are *exempt zones*: 1s seen
/// there may belong to a neighboring cell's transmitter, so a cell whose
/// 1s all fall in exempt zones is declared empty. A cell with any 1 outside
/// the exempt zones reports the midpoint of the minimal span of *all* its
/// 1s, exempt or not.
///
/// Adjacent transmitters must be at least `separation_coeff * ln(n) / n`
/// apart with `separation_coeff > 10 * cell_coeff`; that spacing is what
/// stops one cell from seeing two transmitters or mixing a transmitter
/// with a neighbor's spillover.
pub fn five_partition_localize(
    d: &Deployment,
    cell_coeff: f64,
    separation_coeff: f64,
) -> Result<Vec<f64>> {
    let n = d.sensors().len();
    if n < 2 {
        return Err(Error::InvalidArgument(
            "partitioned localizer needs at least two sensors".into(),
        ));
    }
    if d.flip_prob() > 0.0 {
        return Err(Error::InvalidArgument(
            "partitioned localizer requires noise-free readings".into(),
        ));
    }
    let base = (n as f64).ln() / n as f64;
    let rs = d.radio_range();
    if !(cell_coeff.is_finite() && cell_coeff > 0.0) {
        return Err(Error::InvalidArgument(format!(
            "cell coefficient must be positive, got {cell_coeff}"
        )));
    }
    if (rs - cell_coeff * base).abs() > 1e-9 * rs {
        return Err(Error::InvalidArgument(format!(
            "radio range {rs} does not match cell_coeff * ln(n)/n = {}",
            cell_coeff * base
        )));
    }
    if separation_coeff <= 10.0 * cell_coeff {
        return Err(Error::InvalidArgument(format!(
            "separation coefficient {separation_coeff} must exceed 10 * cell coefficient {cell_coeff}"
        )));
    }
    let min_gap = separation_coeff * base;
    if d.transmitters().windows(2).any(|w| w[1] - w[0] < min_gap - 1e-12) {
        return Err(Error::InvalidArgument(format!(
            "transmitter separation below required {min_gap}"
        )));
    }

    let cell_width = 10.0 * cell_coeff * base;
    let num_cells = (1.0 / cell_width).ceil() as usize;
    // per cell: min/max of 1-reading positions, and whether any 1 escapes
    // the exempt zones
    let mut span: Vec<Option<(f64, f64, bool)>> = vec![None; num_cells.max(1)];
    for (&s, &r) in d.sensors().iter().zip(d.readings()) {
        if !r {
            continue;
        }
        let k = ((s / cell_width).floor() as usize).min(num_cells.saturating_sub(1));
        let lo = k as f64 * cell_width;
        let hi = ((k + 1) as f64 * cell_width).min(1.0);
        let margin = 0.1 * (hi - lo);
        let core = s > lo + margin + 1e-12 && s < hi - margin - 1e-12;
        let entry = span[k].get_or_insert((s, s, false));
        entry.0 = entry.0.min(s);
        entry.1 = entry.1.max(s);
        entry.2 |= core;
    }
    let estimates = span
        .into_iter()
        .flatten()
        .filter(|&(_, _, core)| core)
        .map(|(lo, hi, _)| 0.5 * (lo + hi))
        .collect();
    Ok(estimates)
}
