//! Source metadata parsing and graph population.

mod fields;
mod model;
mod pangaea;
mod publication;
mod sources;
mod stac;

use serde_json::json;
use thiserror::Error;

pub use model::{
    AuthorRef, IngestReport, NormalizedDataset, PublicationRecord, RecordKind, Rejection,
    TemporalCoverage,
};
pub use pangaea::{pangaea_from_value, parse_pangaea_record, PANGAEA_ORGANIZATION};
pub use publication::{parse_publication, publication_from_value};
pub use sources::{
    load_source_documents, parse_source_documents, read_sources_config, ParsedSource, SourceConfig,
    SourceKind,
};
pub use stac::{parse_stac_collection, stac_from_value, STAC_ORGANIZATION};

use crate::error::FieldError;
use crate::graph::{
    author_key, encode_key, schema, Attrs, EdgeKind, GraphError, GraphStore, NodeId, NodeKind,
};
use crate::semantics::normalize_term;

/// Why a single source record could not be normalized.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RecordError {
    #[error("parse error: {0}")]
    Parse(String),
    #[error("field error: {0}")]
    Field(#[from] FieldError),
}

#[derive(Debug, Error)]
pub enum IngestError {
    #[error("store is frozen; ingestion requires the build phase")]
    BuildPhase,
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error("{path}: {message}")]
    Source { path: String, message: String },
}

fn direct() -> Attrs {
    let mut attrs = Attrs::new();
    attrs.insert(schema::PROVENANCE.into(), json!(schema::PROVENANCE_DIRECT));
    attrs
}

pub fn corpus_id(corpus_name: &str) -> Result<NodeId, GraphError> {
    NodeId::new(NodeKind::Corpus, &encode_key(corpus_name))
}

pub fn dataset_id(record: &NormalizedDataset) -> Result<NodeId, GraphError> {
    NodeId::new(record.kind.node_kind(), &encode_key(&record.source_key))
}

pub fn keyword_id(term: &str) -> Result<NodeId, GraphError> {
    NodeId::new(NodeKind::Keyword, &encode_key(term))
}

pub fn author_id(name: &str) -> Result<NodeId, GraphError> {
    NodeId::new(NodeKind::Author, &author_key(name))
}

/// Adds the node unless it already exists; reports whether it was new.
fn ensure_node(store: &mut GraphStore, id: &NodeId, attrs: Attrs) -> Result<bool, GraphError> {
    if store.contains(id) {
        return Ok(false);
    }
    store.add_node(id.kind(), id.key(), attrs)?;
    Ok(true)
}

pub(crate) fn ensure_keyword(store: &mut GraphStore, term: &str) -> Result<NodeId, GraphError> {
    let id = keyword_id(term)?;
    let mut attrs = Attrs::new();
    attrs.insert("term".into(), json!(term));
    ensure_node(store, &id, attrs)?;
    Ok(id)
}

fn ensure_author(store: &mut GraphStore, author: &AuthorRef) -> Result<NodeId, GraphError> {
    let id = author_id(&author.name)?;
    let mut attrs = Attrs::new();
    attrs.insert("name".into(), json!(author.name));
    if let Some(org) = &author.organization {
        attrs.insert("organization".into(), json!(org));
    }
    ensure_node(store, &id, attrs)?;
    Ok(id)
}

/// Writes one batch into the graph.
///
/// Authors and keywords are shared across all corpora. A record whose id
/// already exists with identical attributes is skipped, so re-ingesting a
/// batch changes nothing; invalid records are reported and skipped.
pub fn ingest(
    store: &mut GraphStore,
    datasets: &[NormalizedDataset],
    publications: &[PublicationRecord],
    corpus_name: &str,
) -> Result<IngestReport, IngestError> {
    if store.is_frozen() {
        return Err(IngestError::BuildPhase);
    }
    let before: Vec<usize> = NodeKind::ALL.iter().map(|&k| store.count_of_kind(k)).collect();
    let edges_before = store.edge_count();
    let mut report = IngestReport::default();

    if !datasets.is_empty() {
        let corpus = corpus_id(corpus_name)?;
        let mut attrs = Attrs::new();
        attrs.insert("name".into(), json!(corpus_name));
        ensure_node(store, &corpus, attrs)?;
        for record in datasets {
            if let Err(reason) = ingest_dataset(store, record, &corpus)? {
                report.reject(&record.source_key, reason);
            }
        }
    }

    for publication in publications {
        match ingest_publication(store, publication)? {
            Err(reason) => report.reject(&publication.source_key, reason),
            Ok(unresolved) => {
                report.unresolved_links.extend(unresolved.into_iter().map(|key| Rejection {
                    source_key: publication.source_key.clone(),
                    reason: format!("related dataset {key:?} not found"),
                }))
            }
        }
    }

    let delta = |kind: NodeKind| {
        let i = NodeKind::ALL.iter().position(|&k| k == kind).expect("listed kind");
        store.count_of_kind(kind) - before[i]
    };
    report.corpora_added = delta(NodeKind::Corpus);
    report.datasets_added = delta(NodeKind::Dataset);
    report.collections_added = delta(NodeKind::StacCollection);
    report.publications_added = delta(NodeKind::Publication);
    report.authors_added = delta(NodeKind::Author);
    report.keywords_added = delta(NodeKind::Keyword);
    report.edges_added = store.edge_count() - edges_before;
    Ok(report)
}

/// Outer error aborts the batch; inner error rejects only this record.
fn ingest_dataset(
    store: &mut GraphStore,
    record: &NormalizedDataset,
    corpus: &NodeId,
) -> Result<Result<(), String>, GraphError> {
    if let Err(e) = record.validate() {
        return Ok(Err(e.to_string()));
    }
    let id = match dataset_id(record) {
        Ok(id) => id,
        Err(e) => return Ok(Err(e.to_string())),
    };
    let attrs = record.to_attrs();
    if let Some(existing) = store.node(&id) {
        if existing.attrs != attrs {
            return Ok(Err(format!("{id} already ingested with different metadata")));
        }
    } else if let Err(e) = store.add_node(id.kind(), id.key(), attrs) {
        return Ok(Err(e.to_string()));
    }

    store.add_edge(EdgeKind::BelongsToCorpus, &id, corpus, direct())?;
    for author in &record.authors {
        let author = ensure_author(store, author)?;
        store.add_edge(EdgeKind::HasAuthor, &id, &author, direct())?;
    }
    for keyword in &record.keywords {
        let term = normalize_term(keyword);
        if term.is_empty() {
            continue;
        }
        let keyword = ensure_keyword(store, &term)?;
        store.add_edge(EdgeKind::HasKeyword, &id, &keyword, direct())?;
    }
    Ok(Ok(()))
}

/// Returns the related dataset keys that could not be resolved.
fn ingest_publication(
    store: &mut GraphStore,
    publication: &PublicationRecord,
) -> Result<Result<Vec<String>, String>, GraphError> {
    let id = match NodeId::new(NodeKind::Publication, &encode_key(publication.source_key.trim())) {
        Ok(id) => id,
        Err(e) => return Ok(Err(e.to_string())),
    };
    let attrs = publication.to_attrs();
    if let Some(existing) = store.node(&id) {
        if existing.attrs != attrs {
            return Ok(Err(format!("{id} already ingested with different metadata")));
        }
    } else if let Err(e) = store.add_node(NodeKind::Publication, id.key(), attrs) {
        return Ok(Err(e.to_string()));
    }

    for keyword in &publication.keywords {
        let term = normalize_term(keyword);
        if term.is_empty() {
            continue;
        }
        let keyword = ensure_keyword(store, &term)?;
        store.add_edge(EdgeKind::HasKeyword, &id, &keyword, direct())?;
    }
    let mut unresolved = Vec::new();
    for key in &publication.related_dataset_keys {
        let dataset = NodeId::new(NodeKind::Dataset, &encode_key(key.trim()))
            .ok()
            .filter(|d| store.contains(d));
        match dataset {
            Some(dataset) => {
                store.add_edge(EdgeKind::HasPublication, &dataset, &id, direct())?;
            }
            None => unresolved.push(key.clone()),
        }
    }
    Ok(Ok(unresolved))
}
