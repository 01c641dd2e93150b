//! Closed intervals on the unit segment and canonical disjoint unions.
//!
//! All region bookkeeping in this crate reduces to finite unions of closed
//! subintervals of `[0, 1]`. [`IntervalSet`] keeps such unions in a canonical
//! form — sorted, pairwise disjoint, non-touching, with zero-width components
//! dropped — so that equality of sets is equality of their representations
//! and `complement(complement(s)) == s` holds exactly (endpoints are copied,
//! never recomputed).
//!
//! Sets are treated up to null sets: a degenerate interval `[a, a]` carries
//! no measure and is discarded during canonicalization.

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `0 <= lo <= hi <= 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Interval {
    lo: f64,
    hi: f64,
}

impl Interval {
    /// Builds an interval, validating `0 <= lo <= hi <= 1` and finiteness.
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo.is_finite() && hi.is_finite()) || lo < 0.0 || hi > 1.0 || lo > hi {
            return Err(Error::InvalidInterval { lo, hi });
        }
        Ok(Interval { lo, hi })
    }

    /// The interval of all points within `radius` of `center`, clipped to the
    /// unit segment: `[max(center - radius, 0), min(center + radius, 1)]`.
    ///
    /// `center` must lie in `[0, 1]` and `radius` must be non-negative, so
    /// the clipped interval is never empty.
    pub fn clipped(center: f64, radius: f64) -> Result<Self> {
        if !center.is_finite() || !(0.0..=1.0).contains(&center) {
            return Err(Error::InvalidArgument(format!(
                "clipped-interval center {center} outside [0, 1]"
            )));
        }
        if !radius.is_finite() || radius < 0.0 {
            return Err(Error::InvalidArgument(format!("negative clipping radius {radius}")));
        }
        Ok(Interval { lo: (center - radius).max(0.0), hi: (center + radius).min(1.0) })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }

    /// Closed containment: `lo <= x <= hi`.
    pub fn contains(&self, x: f64) -> bool {
        self.lo <= x && x <= self.hi
    }
}

/// A canonical union of disjoint closed intervals on `[0, 1]`.
///
/// Canonical form: components sorted ascending, each with positive width,
/// and `components[k].hi < components[k + 1].lo` (touching components are
/// merged on construction).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct IntervalSet {
    intervals: Vec<Interval>,
}

impl IntervalSet {
    /// The empty set.
    pub fn empty() -> Self {
        IntervalSet { intervals: Vec::new() }
    }

    /// The whole unit segment.
    pub fn full() -> Self {
        IntervalSet { intervals: vec![Interval { lo: 0.0, hi: 1.0 }] }
    }

    /// Canonicalizes an arbitrary collection of intervals: sorts, merges
    /// overlapping or touching components, drops zero-width ones. The result
    /// is independent of input order.
    pub fn from_intervals<I: IntoIterator<Item = Interval>>(intervals: I) -> Self {
        let mut v: Vec<Interval> = intervals.into_iter().collect();
        v.sort_by(|a, b| a.lo.partial_cmp(&b.lo).expect("interval endpoints are finite"));
        let mut out: Vec<Interval> = Vec::with_capacity(v.len());
        for iv in v {
            match out.last_mut() {
                // touching endpoints (iv.lo == cur.hi) merge: the union is
                // still a single closed interval
                Some(cur) if iv.lo <= cur.hi => {
                    if iv.hi > cur.hi {
                        cur.hi = iv.hi;
                    }
                }
                _ => out.push(iv),
            }
        }
        out.retain(|iv| iv.width() > 0.0);
        IntervalSet { intervals: out }
    }

    /// The canonical components, sorted and disjoint.
    pub fn intervals(&self) -> &[Interval] {
        &self.intervals
    }

    pub fn is_empty(&self) -> bool {
        self.intervals.is_empty()
    }

    /// Total length of the set (Lebesgue measure).
    pub fn measure(&self) -> f64 {
        self.intervals.iter().map(Interval::width).sum()
    }

    /// Membership is the logical OR of component containment.
    pub fn contains(&self, x: f64) -> bool {
        // components are sorted, so binary-search the candidate
        let idx = self.intervals.partition_point(|iv| iv.hi < x);
        self.intervals.get(idx).is_some_and(|iv| iv.contains(x))
    }

    /// Set union, merging across the two canonical component lists.
    pub fn union(&self, other: &IntervalSet) -> IntervalSet {
        IntervalSet::from_intervals(self.intervals.iter().chain(other.intervals.iter()).copied())
    }

    /// The closure of `[0, 1] \ self`: the gaps between components, plus the
    /// stubs down to 0 and up to 1. Endpoints are copied verbatim, so
    /// applying `complement` twice reproduces the set exactly.
    pub fn complement(&self) -> IntervalSet {
        let mut out = Vec::with_capacity(self.intervals.len() + 1);
        let mut cursor = 0.0;
        for iv in &self.intervals {
            if iv.lo > cursor {
                out.push(Interval { lo: cursor, hi: iv.lo });
            }
            cursor = iv.hi;
        }
        if cursor < 1.0 {
            out.push(Interval { lo: cursor, hi: 1.0 });
        }
        IntervalSet { intervals: out }
    }
}
