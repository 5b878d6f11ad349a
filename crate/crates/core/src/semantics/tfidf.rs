//! TF-IDF keyword scoring over dataset metadata documents.
//!
//! A document is the token stream of one dataset's title, abstract and
//! curated keywords. For a term `t`:
//!
//! * `tf(t, d)` is the raw count of `t` in document `d`,
//! * `idf(t) = ln(N / df(t))` with `N` documents, no smoothing,
//! * the aggregate score is `max_d tf(t, d) * idf(t)`.
//!
//! Terms present in every document therefore score exactly zero.

use std::cmp::Ordering;
use std::collections::{BTreeMap, HashMap};

use serde::Serialize;
use serde_json::json;

use super::tokenize::{keyword_term, tokenize, TokenizerConfig};
use super::SemanticsError;
use crate::graph::{schema, Attrs, EdgeKind, GraphError, GraphNode, GraphStore, NodeId};
use crate::ingest::ensure_keyword;
use crate::scalar::Scalar;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct KeywordScore<S = f64> {
    pub term: String,
    pub score: S,
    pub document_frequency: usize,
    pub dataset_ids: Vec<NodeId>,
}

pub type ScoreTable<S = f64> = BTreeMap<String, KeywordScore<S>>;

/// Token stream of a dataset node.
pub fn document_terms(node: &GraphNode, config: &TokenizerConfig) -> Vec<String> {
    let text = |field: &str| node.attrs.get(field).and_then(|v| v.as_str()).unwrap_or_default();
    let mut terms = tokenize(text("title"), config);
    terms.extend(tokenize(text("abstract"), config));
    if let Some(keywords) = node.attrs.get("keywords").and_then(|v| v.as_array()) {
        terms.extend(
            keywords
                .iter()
                .filter_map(|k| k.as_str())
                .filter_map(|k| keyword_term(k, config)),
        );
    }
    terms
}

/// Scores already-tokenized documents.
pub fn score_documents<S: Scalar>(documents: &[(NodeId, Vec<String>)]) -> ScoreTable<S> {
    let n = S::from_count(documents.len());
    // term -> (max tf, containing documents)
    let mut stats: HashMap<&str, (usize, Vec<&NodeId>)> = HashMap::new();
    for (id, terms) in documents {
        let mut counts: HashMap<&str, usize> = HashMap::new();
        for term in terms {
            *counts.entry(term.as_str()).or_default() += 1;
        }
        for (term, tf) in counts {
            let entry = stats.entry(term).or_default();
            entry.0 = entry.0.max(tf);
            entry.1.push(id);
        }
    }
    stats
        .into_iter()
        .map(|(term, (max_tf, mut ids))| {
            ids.sort();
            ids.dedup();
            let df = ids.len();
            let idf = (n / S::from_count(df)).ln();
            let score = S::from_count(max_tf) * idf;
            let entry = KeywordScore {
                term: term.to_owned(),
                score: score.max(S::zero()),
                document_frequency: df,
                dataset_ids: ids.into_iter().cloned().collect(),
            };
            (term.to_owned(), entry)
        })
        .collect()
}

/// Scores every dataset and STAC collection in the store.
pub fn compute_tfidf<S: Scalar>(store: &GraphStore, config: &TokenizerConfig) -> Result<ScoreTable<S>, SemanticsError> {
    let documents: Vec<(NodeId, Vec<String>)> = store
        .dataset_nodes()
        .map(|node| (node.id.clone(), document_terms(node, config)))
        .collect();
    if documents.is_empty() {
        return Err(SemanticsError::EmptyStore);
    }
    Ok(score_documents(&documents))
}

/// Ranking used for the cloud: score desc, document frequency desc, term asc.
pub fn cloud_order<S: Scalar>(a: &KeywordScore<S>, b: &KeywordScore<S>) -> Ordering {
    b.score
        .partial_cmp(&a.score)
        .unwrap_or(Ordering::Equal)
        .then_with(|| b.document_frequency.cmp(&a.document_frequency))
        .then_with(|| a.term.cmp(&b.term))
}

/// Top `k` keywords by [`cloud_order`].
pub fn select_cloud_keywords<S: Scalar>(scores: &ScoreTable<S>, k: usize) -> Result<Vec<KeywordScore<S>>, SemanticsError> {
    if k == 0 {
        return Err(SemanticsError::InvalidConfig("cloud size k must be at least 1".into()));
    }
    let mut ranked: Vec<&KeywordScore<S>> = scores.values().collect();
    ranked.sort_by(|a, b| cloud_order(a, b));
    Ok(ranked.into_iter().take(k).cloned().collect())
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MaterializeReport {
    pub keywords_added: usize,
    pub edges_added: usize,
}

/// Writes scores onto Keyword nodes, creating nodes for extracted terms and
/// linking each document to its terms with `provenance: "extracted"` where
/// no edge exists yet.
pub fn materialize_scores(store: &mut GraphStore, table: &ScoreTable<f64>) -> Result<MaterializeReport, GraphError> {
    let mut report = MaterializeReport::default();
    for entry in table.values() {
        let existed = store.keyword_node(&entry.term).is_some();
        let keyword = ensure_keyword(store, &entry.term)?;
        if !existed {
            report.keywords_added += 1;
        }
        store.set_node_attr(&keyword, "score", json!(entry.score))?;
        store.set_node_attr(&keyword, "document_frequency", json!(entry.document_frequency))?;
        for dataset in &entry.dataset_ids {
            if store.edge_between(EdgeKind::HasKeyword, dataset, &keyword).is_none() {
                let mut attrs = Attrs::new();
                attrs.insert(schema::PROVENANCE.into(), json!(schema::PROVENANCE_EXTRACTED));
                store.add_edge(EdgeKind::HasKeyword, dataset, &keyword, attrs)?;
                report.edges_added += 1;
            }
        }
    }
    Ok(report)
}
