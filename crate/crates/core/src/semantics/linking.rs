//! Cross-source linking through shared keywords and mediating publications.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use super::tokenize::normalize_term;
use super::SemanticsError;
use crate::graph::{schema, Attrs, Direction, EdgeKind, GraphEdge, GraphStore, NodeId, NodeKind};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SharedKeyword {
    pub term: String,
    pub corpora: Vec<String>,
}

fn corpus_names_of(store: &GraphStore, dataset: &NodeId) -> Vec<String> {
    store
        .neighbor_set(dataset, EdgeKind::BelongsToCorpus, Direction::Out)
        .ok()
        .flatten()
        .into_iter()
        .flatten()
        .map(|corpus| {
            store
                .node(corpus)
                .and_then(|n| n.attrs.get("name"))
                .and_then(|v| v.as_str())
                .map_or_else(|| corpus.key().to_owned(), str::to_owned)
        })
        .collect()
}

fn term_of(store: &GraphStore, keyword: &NodeId) -> String {
    store
        .node(keyword)
        .and_then(|n| n.attrs.get("term"))
        .and_then(|v| v.as_str())
        .map_or_else(|| keyword.key().to_owned(), str::to_owned)
}

/// Keywords attached (with any provenance) to datasets of at least two
/// distinct corpora. Keyword nodes are global, so no edges are added.
pub fn link_common_keywords(store: &GraphStore) -> Vec<SharedKeyword> {
    let mut shared = Vec::new();
    for keyword in store.nodes_of_kind(NodeKind::Keyword) {
        let Ok(Some(sources)) = store.neighbor_set(&keyword.id, EdgeKind::HasKeyword, Direction::In) else {
            continue;
        };
        let corpora: BTreeSet<String> = sources
            .iter()
            .filter(|s| s.kind().is_dataset())
            .flat_map(|s| corpus_names_of(store, s))
            .collect();
        if corpora.len() >= 2 {
            shared.push(SharedKeyword { term: term_of(store, &keyword.id), corpora: corpora.into_iter().collect() });
        }
    }
    shared.sort_by(|a, b| a.term.cmp(&b.term));
    shared
}

fn has_direct_keywords(store: &GraphStore, collection: &NodeId) -> bool {
    store
        .neighbor_set(collection, EdgeKind::HasKeyword, Direction::Out)
        .ok()
        .flatten()
        .into_iter()
        .flatten()
        .filter_map(|k| store.edge_between(EdgeKind::HasKeyword, collection, k))
        .any(|e| e.provenance() != Some(schema::PROVENANCE_MEDIATED))
}

fn missions_of(store: &GraphStore, collection: &NodeId) -> BTreeSet<String> {
    store
        .node(collection)
        .and_then(|n| n.attrs.get("missions"))
        .and_then(|v| v.as_array())
        .into_iter()
        .flatten()
        .filter_map(|m| m.as_str())
        .map(normalize_term)
        .filter(|m| !m.is_empty())
        .collect()
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct MediationReport {
    pub mediated_edges: usize,
    pub mission_links: usize,
}

/// Gives keyword-less STAC collections the keywords of publications that
/// mention their mission.
///
/// For every collection without direct keywords and every publication whose
/// `mission_mentions` contains one of the collection's mission identifiers
/// (case-insensitive exact match), adds `mentionsMission` publication ->
/// collection and `hasKeyword` collection -> each publication keyword with
/// `provenance: "mediated"`.
pub fn mediate_stac_keywords(store: &mut GraphStore) -> Result<MediationReport, SemanticsError> {
    if store.is_frozen() {
        return Err(SemanticsError::BuildPhase);
    }
    let publications: Vec<(NodeId, BTreeSet<String>)> = store
        .nodes_of_kind(NodeKind::Publication)
        .map(|p| {
            let mentions = p
                .attrs
                .get("mission_mentions")
                .and_then(|v| v.as_array())
                .into_iter()
                .flatten()
                .filter_map(|m| m.as_str())
                .map(normalize_term)
                .collect();
            (p.id.clone(), mentions)
        })
        .collect();
    let collections: Vec<NodeId> = store
        .nodes_of_kind(NodeKind::StacCollection)
        .map(|n| n.id.clone())
        .filter(|c| !has_direct_keywords(store, c))
        .collect();

    let mut report = MediationReport::default();
    for collection in collections {
        let missions = missions_of(store, &collection);
        for (publication, mentions) in &publications {
            if mentions.is_disjoint(&missions) {
                continue;
            }
            let mut link = Attrs::new();
            link.insert(schema::PROVENANCE.into(), json!(schema::PROVENANCE_MEDIATED));
            if store.edge_between(EdgeKind::MentionsMission, publication, &collection).is_none() {
                store.add_edge(EdgeKind::MentionsMission, publication, &collection, link)?;
                report.mission_links += 1;
            }
            let keywords = store.neighbors(publication, EdgeKind::HasKeyword, Direction::Out)?;
            for keyword in keywords {
                if store.edge_between(EdgeKind::HasKeyword, &collection, &keyword).is_some() {
                    continue;
                }
                let mut attrs = Attrs::new();
                attrs.insert(schema::PROVENANCE.into(), json!(schema::PROVENANCE_MEDIATED));
                attrs.insert("via".into(), json!(publication.as_str()));
                store.add_edge(EdgeKind::HasKeyword, &collection, &keyword, attrs)?;
                report.mediated_edges += 1;
            }
        }
    }
    Ok(report)
}

/// A publication justifying a mediated edge: it mentions the collection's
/// mission and carries the keyword.
pub fn mediation_witness(store: &GraphStore, edge: &GraphEdge) -> Option<NodeId> {
    if edge.kind != EdgeKind::HasKeyword || edge.provenance() != Some(schema::PROVENANCE_MEDIATED) {
        return None;
    }
    let missions = missions_of(store, &edge.from);
    let mentioning = store
        .neighbor_set(&edge.from, EdgeKind::MentionsMission, Direction::In)
        .ok()
        .flatten()?;
    mentioning
        .iter()
        .find(|publication| {
            let carries_keyword = store.edge_between(EdgeKind::HasKeyword, publication, &edge.to).is_some();
            let mentions = store
                .node(publication)
                .and_then(|p| p.attrs.get("mission_mentions"))
                .and_then(|v| v.as_array())
                .into_iter()
                .flatten()
                .filter_map(|m| m.as_str())
                .any(|m| missions.contains(&normalize_term(m)));
            carries_keyword && mentions
        })
        .cloned()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelatedKeyword {
    pub term: String,
    pub co_count: usize,
}

/// Keywords of datasets that carry `term`, ranked by the number of such
/// datasets (desc), then term.
pub fn related_keywords(store: &GraphStore, term: &str) -> Result<Vec<RelatedKeyword>, SemanticsError> {
    let normalized = normalize_term(term);
    let keyword = store
        .keyword_node(&normalized)
        .or_else(|| store.keyword_node(term))
        .ok_or_else(|| SemanticsError::UnknownKeyword(term.to_owned()))?
        .clone();
    let mut counts: BTreeMap<NodeId, usize> = BTreeMap::new();
    let datasets = store.neighbor_set(&keyword, EdgeKind::HasKeyword, Direction::In)?;
    for dataset in datasets.into_iter().flatten().filter(|d| d.kind().is_dataset()) {
        for other in store.neighbor_set(dataset, EdgeKind::HasKeyword, Direction::Out)?.into_iter().flatten() {
            if *other != keyword {
                *counts.entry(other.clone()).or_default() += 1;
            }
        }
    }
    let mut related: Vec<RelatedKeyword> = counts
        .into_iter()
        .map(|(id, co_count)| RelatedKeyword { term: term_of(store, &id), co_count })
        .collect();
    related.sort_by(|a, b| b.co_count.cmp(&a.co_count).then_with(|| a.term.cmp(&b.term)));
    Ok(related)
}
