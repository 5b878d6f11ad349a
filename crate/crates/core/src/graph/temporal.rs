//! Interval index over dataset temporal coverage.
//!
//! Intervals are kept sorted by start with a per-block maximum end, so a
//! query only visits blocks that can still overlap. Open bounds are stored
//! as `i64::MIN` / `i64::MAX` microseconds.

use super::{Attrs, NodeId};
use crate::timestamp::Timestamp;

const BLOCK: usize = 32;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct CoverageInterval {
    pub start: i64,
    pub end: i64,
    pub id: NodeId,
}

#[derive(Clone, Debug, Default)]
pub struct TemporalIndex {
    entries: Vec<CoverageInterval>,
    block_max_end: Vec<i64>,
    finalized: bool,
}

impl TemporalIndex {
    pub fn insert(&mut self, id: NodeId, start: i64, end: i64) {
        self.entries.push(CoverageInterval { start, end, id });
        self.finalized = false;
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Sorts entries and builds block summaries. Queries before this fall
    /// back to a linear scan.
    pub fn finalize(&mut self) {
        self.entries.sort();
        self.block_max_end = self
            .entries
            .chunks(BLOCK)
            .map(|chunk| chunk.iter().map(|e| e.end).max().unwrap_or(i64::MIN))
            .collect();
        self.finalized = true;
    }

    pub fn entries(&self) -> &[CoverageInterval] {
        &self.entries
    }

    /// Ids whose coverage intersects the closed interval `[lo, hi]`.
    pub fn intersecting(&self, lo: i64, hi: i64) -> Vec<NodeId> {
        if !self.finalized {
            return self
                .entries
                .iter()
                .filter(|e| e.start <= hi && e.end >= lo)
                .map(|e| e.id.clone())
                .collect();
        }
        // Entries past this point start after `hi`.
        let stop = self.entries.partition_point(|e| e.start <= hi);
        let mut out = Vec::new();
        for (block, max_end) in self.block_max_end.iter().enumerate() {
            let begin = block * BLOCK;
            if begin >= stop {
                break;
            }
            if *max_end < lo {
                continue;
            }
            let end = (begin + BLOCK).min(stop);
            out.extend(
                self.entries[begin..end]
                    .iter()
                    .filter(|e| e.end >= lo)
                    .map(|e| e.id.clone()),
            );
        }
        out
    }
}

impl PartialEq for TemporalIndex {
    fn eq(&self, other: &Self) -> bool {
        let mut a = self.entries.clone();
        let mut b = other.entries.clone();
        a.sort();
        b.sort();
        a == b
    }
}

/// Coverage bounds recorded in dataset attributes; `None` when the dataset
/// has no usable coverage at all.
pub fn coverage_bounds(attrs: &Attrs) -> Option<(Option<Timestamp>, Option<Timestamp>)> {
    let coverage = attrs.get("temporal_coverage")?.as_object()?;
    let bound = |field: &str| {
        coverage
            .get(field)
            .and_then(|v| v.as_str())
            .and_then(|s| Timestamp::parse(s).ok())
    };
    let (start, end) = (bound("start"), bound("end"));
    if start.is_none() && end.is_none() {
        None
    } else {
        Some((start, end))
    }
}

pub fn coverage_micros(attrs: &Attrs) -> Option<(i64, i64)> {
    coverage_bounds(attrs).map(|(s, e)| {
        (
            s.map_or(i64::MIN, |t| t.micros()),
            e.map_or(i64::MAX, |t| t.micros()),
        )
    })
}
