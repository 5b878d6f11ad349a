//! Typed metadata graph, ingestion, keyword semantics and cross-filter
//! queries behind the VESA search service.

pub mod build;
pub mod error;
pub mod geo;
pub mod graph;
pub mod ingest;
pub mod query;
pub mod scalar;
pub mod semantics;
pub mod timestamp;

pub use build::{build_graph, read_configured_fixtures, read_fixtures, BuildError, BuildReport};
pub use graph::{GraphStore, NodeId};
pub use query::{Catalog, QueryError, SelectionState};
pub use timestamp::{TimeRange, Timestamp};

pub type KeywordScore = semantics::KeywordScore<f64>;
pub type KeywordScore32 = semantics::KeywordScore<f32>;
pub type ScoreTable = semantics::ScoreTable<f64>;
pub type ScoreTable32 = semantics::ScoreTable<f32>;
