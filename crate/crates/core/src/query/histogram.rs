//! Calendar-binned dataset counts over the global temporal axis.

use chrono::{DateTime, Datelike, NaiveDate, Utc};
use serde::{Deserialize, Serialize};

use super::catalog::Catalog;
use super::evaluate::FilterResult;
use super::QueryError;
use crate::timestamp::Timestamp;

/// Upper bound on bins in one histogram.
pub const MAX_BINS: usize = 100_000;

const MICROS_PER_DAY: i64 = 86_400_000_000;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BinUnit {
    Day,
    Month,
    Year,
}

impl BinUnit {
    /// Finest unit that keeps the axis within `max_bins` bins.
    pub fn auto(axis: Option<(i64, i64)>, max_bins: usize) -> BinUnit {
        let Some((lo, hi)) = axis else {
            return BinUnit::Year;
        };
        [BinUnit::Day, BinUnit::Month]
            .into_iter()
            .find(|unit| unit.index(hi) - unit.index(lo) < max_bins as i64)
            .unwrap_or(BinUnit::Year)
    }

    fn date(micros: i64) -> NaiveDate {
        DateTime::<Utc>::from_timestamp_micros(micros)
            .map(|d| d.date_naive())
            .unwrap_or(if micros < 0 { NaiveDate::MIN } else { NaiveDate::MAX })
    }

    /// Absolute bin number of an instant.
    fn index(self, micros: i64) -> i64 {
        match self {
            BinUnit::Day => micros.div_euclid(MICROS_PER_DAY),
            BinUnit::Month => {
                let d = Self::date(micros);
                d.year() as i64 * 12 + d.month0() as i64
            }
            BinUnit::Year => Self::date(micros).year() as i64,
        }
    }

    /// First instant of an absolute bin number.
    fn start_of(self, index: i64) -> DateTime<Utc> {
        let date = match self {
            BinUnit::Day => return DateTime::from_timestamp_micros(index * MICROS_PER_DAY).unwrap_or_default(),
            BinUnit::Month => NaiveDate::from_ymd_opt(index.div_euclid(12) as i32, index.rem_euclid(12) as u32 + 1, 1),
            BinUnit::Year => NaiveDate::from_ymd_opt(index as i32, 1, 1),
        };
        date.and_then(|d| d.and_hms_opt(0, 0, 0)).map(|d| d.and_utc()).unwrap_or_default()
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HistogramBin {
    pub bin_start: Timestamp,
    /// Exclusive.
    pub bin_end: Timestamp,
    pub count: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Histogram {
    pub bin: BinUnit,
    pub bins: Vec<HistogramBin>,
    /// Filtered datasets without temporal coverage.
    pub undated: usize,
}

impl Catalog {
    /// Counts filtered datasets per calendar bin. The axis always spans the
    /// whole store; a dataset counts in every bin its closed coverage
    /// interval touches, with open ends clipped to the axis.
    pub fn temporal_histogram(&self, result: &FilterResult, bin: BinUnit) -> Result<Histogram, QueryError> {
        let positions = self.result_positions(result);
        let undated = positions.iter().filter(|&&i| self.datasets()[i].coverage.is_none()).count();
        let Some((lo, hi)) = self.temporal_axis() else {
            return Ok(Histogram { bin, bins: Vec::new(), undated });
        };
        let first = bin.index(lo);
        let len = (bin.index(hi) - first + 1) as usize;
        if len > MAX_BINS {
            return Err(QueryError::TooManyBins { requested: len, max: MAX_BINS });
        }

        // difference array over bin offsets
        let mut diff = vec![0i64; len + 1];
        for &i in &positions {
            let Some((start, end)) = self.datasets()[i].coverage else { continue };
            let a = (bin.index(start.clamp(lo, hi)) - first) as usize;
            let b = (bin.index(end.clamp(lo, hi)) - first) as usize;
            diff[a] += 1;
            diff[b + 1] -= 1;
        }
        let mut running = 0i64;
        let bins = (0..len)
            .map(|offset| {
                running += diff[offset];
                let index = first + offset as i64;
                HistogramBin {
                    bin_start: Timestamp::from_instant(bin.start_of(index)),
                    bin_end: Timestamp::from_instant(bin.start_of(index + 1)),
                    count: running as usize,
                }
            })
            .collect();
        Ok(Histogram { bin, bins, undated })
    }
}
