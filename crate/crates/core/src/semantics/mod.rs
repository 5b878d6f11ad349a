//! Keyword extraction, TF-IDF scoring and keyword-based linking.

mod linking;
mod tfidf;
mod tokenize;

use thiserror::Error;

pub use linking::{
    link_common_keywords, mediate_stac_keywords, mediation_witness, related_keywords, MediationReport,
    RelatedKeyword, SharedKeyword,
};
pub use tfidf::{
    cloud_order, compute_tfidf, document_terms, materialize_scores, score_documents, select_cloud_keywords,
    KeywordScore, MaterializeReport, ScoreTable,
};
pub use tokenize::{keyword_term, normalize_term, tokenize, TokenizerConfig, DEFAULT_STOPWORDS};

use crate::graph::GraphError;

#[derive(Debug, Error)]
pub enum SemanticsError {
    #[error("store contains no datasets")]
    EmptyStore,
    #[error("unknown keyword {0:?}")]
    UnknownKeyword(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("store is frozen; this step requires the build phase")]
    BuildPhase,
    #[error(transparent)]
    Graph(#[from] GraphError),
}
