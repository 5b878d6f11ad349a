//! The offline build: parsed sources in, frozen graph out.

use std::path::Path;

use serde::Serialize;
use thiserror::Error;

use crate::graph::GraphStore;
use crate::ingest::{
    ingest, load_source_documents, parse_source_documents, read_sources_config, IngestError, IngestReport,
    ParsedSource, SourceConfig,
};
use crate::semantics::{
    compute_tfidf, materialize_scores, mediate_stac_keywords, MaterializeReport, MediationReport, ScoreTable,
    SemanticsError, TokenizerConfig,
};

#[derive(Debug, Error)]
pub enum BuildError {
    #[error(transparent)]
    Ingest(#[from] IngestError),
    #[error(transparent)]
    Semantics(#[from] SemanticsError),
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct BuildReport {
    pub documents_seen: usize,
    pub ingest: IngestReport,
    pub mediation: MediationReport,
    pub materialized: MaterializeReport,
    pub node_count: usize,
    pub edge_count: usize,
}

impl BuildReport {
    /// Nodes created by every build step.
    pub fn nodes_added(&self) -> usize {
        self.ingest.nodes_added() + self.materialized.keywords_added
    }

    /// Edges created by every build step.
    pub fn edges_added(&self) -> usize {
        self.ingest.edges_added
            + self.mediation.mediated_edges
            + self.mediation.mission_links
            + self.materialized.edges_added
    }
}

/// Ingests every source (datasets before publications so related-dataset
/// references resolve regardless of source order), mediates STAC keywords,
/// materializes TF-IDF scores and freezes the store.
pub fn build_graph(
    sources: &[(SourceConfig, ParsedSource)],
    tokenizer: &TokenizerConfig,
) -> Result<(GraphStore, BuildReport, ScoreTable<f64>), BuildError> {
    let mut store = GraphStore::new();
    let mut report = BuildReport::default();
    for (source, parsed) in sources {
        report.documents_seen += parsed.documents_seen;
        for rejection in &parsed.rejections {
            report.ingest.reject(&rejection.source_key, format!("{}: {}", source.name, rejection.reason));
        }
        report.ingest.merge(ingest(&mut store, &parsed.datasets, &[], &source.name)?);
    }
    for (source, parsed) in sources {
        report.ingest.merge(ingest(&mut store, &[], &parsed.publications, &source.name)?);
    }

    report.mediation = mediate_stac_keywords(&mut store)?;
    let scores = if store.dataset_nodes().next().is_some() {
        compute_tfidf::<f64>(&store, tokenizer)?
    } else {
        ScoreTable::new()
    };
    report.materialized = materialize_scores(&mut store, &scores).map_err(SemanticsError::from)?;
    store.freeze();
    report.node_count = store.node_count();
    report.edge_count = store.edge_count();
    Ok((store, report, scores))
}

/// Reads `<fixtures>/<source name>/*.json` for every source.
pub fn read_fixtures(sources: Vec<SourceConfig>, fixtures: &Path) -> Result<Vec<(SourceConfig, ParsedSource)>, BuildError> {
    let mut parsed = Vec::with_capacity(sources.len());
    for source in sources {
        let documents = load_source_documents(fixtures, &source)?;
        let mut result = parse_source_documents(&source, &documents);
        if let Some(limit) = source.limit {
            result.datasets.truncate(limit);
        }
        parsed.push((source, result));
    }
    Ok(parsed)
}

/// [`read_fixtures`] with the sources taken from a config file.
pub fn read_configured_fixtures(sources_config: &Path, fixtures: &Path) -> Result<Vec<(SourceConfig, ParsedSource)>, BuildError> {
    read_fixtures(read_sources_config(sources_config)?, fixtures)
}
