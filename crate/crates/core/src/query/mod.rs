//! Cross-filter evaluation and the coordinated-view payloads.

mod catalog;
mod evaluate;
mod histogram;
mod payloads;
mod records;
mod selection;

use thiserror::Error;

pub use catalog::{Catalog, DatasetView, QueryOptions, SpatialMode};
pub use evaluate::FilterResult;
pub use histogram::{BinUnit, Histogram, HistogramBin, MAX_BINS};
pub use payloads::{
    AbstractRecord, Chord, ChordAuthor, CloudEntry, DatasetList, ListRow, MapPoint, Page, VisualizationPayloads,
};
pub use records::{CoverageRecord, KeywordDetail, KeywordRecord, MainRecord, RecordList};
pub use selection::SelectionState;

#[derive(Debug, Error)]
pub enum QueryError {
    #[error("unknown keyword {0:?}")]
    UnknownKeyword(String),
    #[error("unknown author {0:?}")]
    UnknownAuthor(String),
    #[error("unknown dataset {0:?}")]
    UnknownDataset(String),
    #[error("invalid selection: {0}")]
    InvalidSelection(String),
    #[error("{requested} bins requested, at most {max} allowed")]
    TooManyBins { requested: usize, max: usize },
    #[error("internal error: {0}")]
    Internal(String),
}
