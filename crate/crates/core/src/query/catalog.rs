use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::QueryError;
use crate::geo::{GeoPoint, SpatialExtent};
use crate::graph::temporal::coverage_micros;
use crate::graph::{Direction, EdgeKind, GraphNode, GraphStore, NodeId, NodeKind};
use crate::semantics::{cloud_order, compute_tfidf, materialize_scores, ScoreTable, TokenizerConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SpatialMode {
    /// A dataset matches when its display point lies inside the box.
    #[default]
    DisplayPoint,
    /// A dataset matches when its bounding box overlaps the box.
    BboxIntersect,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct QueryOptions {
    #[serde(default = "default_cloud_k")]
    pub cloud_k: usize,
    #[serde(default)]
    pub spatial_mode: SpatialMode,
}

fn default_cloud_k() -> usize {
    100
}

impl Default for QueryOptions {
    fn default() -> Self {
        Self { cloud_k: default_cloud_k(), spatial_mode: SpatialMode::default() }
    }
}

/// Per-dataset facts the query paths touch, resolved once at load.
#[derive(Clone, Debug)]
pub struct DatasetView {
    pub id: NodeId,
    pub corpus: String,
    pub organization: String,
    pub title: String,
    pub doi: String,
    pub abstract_text: String,
    /// `(author id, display name)` in record order.
    pub authors: Vec<(NodeId, String)>,
    pub extent: Option<SpatialExtent>,
    pub point: Option<GeoPoint>,
    /// Coverage in epoch microseconds, open ends as `i64::MIN` / `i64::MAX`.
    pub coverage: Option<(i64, i64)>,
}

/// A frozen graph plus everything derived from it for serving queries.
pub struct Catalog {
    store: GraphStore,
    datasets: Vec<DatasetView>,
    positions: HashMap<NodeId, usize>,
    scores: ScoreTable<f64>,
    options: QueryOptions,
    axis: Option<(i64, i64)>,
    /// Positions ordered by title, then id.
    title_order: Vec<usize>,
    /// Scored terms in cloud order, with the positions they occur at.
    ranked_terms: Vec<(String, f64, Vec<usize>)>,
    /// Every author, sorted by name then id.
    authors: Vec<(NodeId, String)>,
    /// Per position, indexes into `authors`.
    author_slots: Vec<Vec<u32>>,
}

fn str_attr<'a>(node: &'a GraphNode, field: &str) -> &'a str {
    node.attrs.get(field).and_then(Value::as_str).unwrap_or_default()
}

impl Catalog {
    /// Wraps a store for querying. A store still in its build phase gets its
    /// keyword scores materialized and is then frozen.
    pub fn new(mut store: GraphStore, tokenizer: &TokenizerConfig, options: QueryOptions) -> Result<Self, QueryError> {
        if options.cloud_k == 0 {
            return Err(QueryError::InvalidSelection("cloud_k must be at least 1".into()));
        }
        let scores = if store.dataset_nodes().next().is_some() {
            compute_tfidf::<f64>(&store, tokenizer).map_err(|e| QueryError::Internal(e.to_string()))?
        } else {
            ScoreTable::new()
        };
        if !store.is_frozen() {
            materialize_scores(&mut store, &scores).map_err(|e| QueryError::Internal(e.to_string()))?;
            store.freeze();
        }

        let mut datasets = Vec::new();
        for node in store.dataset_nodes() {
            datasets.push(Self::view(&store, node));
        }
        let positions: HashMap<NodeId, usize> = datasets.iter().enumerate().map(|(i, d)| (d.id.clone(), i)).collect();
        let axis = datasets
            .iter()
            .filter_map(|d| d.coverage)
            .flat_map(|(s, e)| [s, e])
            .filter(|t| *t != i64::MIN && *t != i64::MAX)
            .fold(None, |acc: Option<(i64, i64)>, t| match acc {
                None => Some((t, t)),
                Some((lo, hi)) => Some((lo.min(t), hi.max(t))),
            });

        let mut title_order: Vec<usize> = (0..datasets.len()).collect();
        title_order.sort_by(|&a, &b| {
            let (a, b) = (&datasets[a], &datasets[b]);
            a.title.cmp(&b.title).then_with(|| a.id.cmp(&b.id))
        });

        let mut ranked: Vec<_> = scores.values().collect();
        ranked.sort_by(|a, b| cloud_order(a, b));
        let ranked_terms = ranked
            .into_iter()
            .map(|entry| {
                let mut at: Vec<usize> = entry.dataset_ids.iter().filter_map(|id| positions.get(id).copied()).collect();
                at.sort_unstable();
                (entry.term.clone(), entry.score, at)
            })
            .collect();

        let mut names: BTreeMap<&NodeId, &str> = BTreeMap::new();
        for dataset in &datasets {
            for (id, name) in &dataset.authors {
                names.entry(id).or_insert(name);
            }
        }
        let mut authors: Vec<(NodeId, String)> = names.into_iter().map(|(id, n)| (id.clone(), n.to_owned())).collect();
        authors.sort_by(|a, b| a.1.cmp(&b.1).then_with(|| a.0.cmp(&b.0)));
        let slot: HashMap<&NodeId, u32> = authors.iter().enumerate().map(|(i, (id, _))| (id, i as u32)).collect();
        let author_slots = datasets
            .iter()
            .map(|d| d.authors.iter().map(|(id, _)| slot[id]).collect())
            .collect();

        Ok(Self {
            store,
            datasets,
            positions,
            scores,
            options,
            axis,
            title_order,
            ranked_terms,
            authors,
            author_slots,
        })
    }

    fn view(store: &GraphStore, node: &GraphNode) -> DatasetView {
        let corpus = store
            .neighbors(&node.id, EdgeKind::BelongsToCorpus, Direction::Out)
            .unwrap_or_default()
            .first()
            .and_then(|c| store.node(c))
            .map(|c| str_attr(c, "name").to_owned())
            .unwrap_or_default();
        let mut authors: Vec<(NodeId, String)> = Vec::new();
        let names = node
            .attrs
            .get("authors")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter_map(|a| a.get("name").and_then(Value::as_str));
        for name in names {
            let Ok(id) = crate::ingest::author_id(name) else { continue };
            if store.contains(&id) && !authors.iter().any(|(seen, _)| *seen == id) {
                authors.push((id, name.to_owned()));
            }
        }
        let extent: Option<SpatialExtent> = node
            .attrs
            .get("location")
            .and_then(|v| serde_json::from_value(v.clone()).ok());
        DatasetView {
            id: node.id.clone(),
            corpus,
            organization: str_attr(node, "organization").to_owned(),
            title: str_attr(node, "title").to_owned(),
            doi: str_attr(node, "doi").to_owned(),
            abstract_text: str_attr(node, "abstract").to_owned(),
            authors,
            point: extent.as_ref().map(SpatialExtent::display_point),
            extent,
            coverage: coverage_micros(&node.attrs),
        }
    }

    pub fn store(&self) -> &GraphStore {
        &self.store
    }

    pub fn options(&self) -> &QueryOptions {
        &self.options
    }

    pub fn scores(&self) -> &ScoreTable<f64> {
        &self.scores
    }

    /// Datasets and STAC collections in id order.
    pub fn datasets(&self) -> &[DatasetView] {
        &self.datasets
    }

    pub fn dataset_count(&self) -> usize {
        self.datasets.len()
    }

    pub fn dataset(&self, id: &NodeId) -> Option<&DatasetView> {
        self.positions.get(id).map(|&i| &self.datasets[i])
    }

    pub(crate) fn position(&self, id: &NodeId) -> Option<usize> {
        self.positions.get(id).copied()
    }

    pub(crate) fn title_order(&self) -> &[usize] {
        &self.title_order
    }

    pub(crate) fn ranked_terms(&self) -> &[(String, f64, Vec<usize>)] {
        &self.ranked_terms
    }

    pub(crate) fn author_table(&self) -> &[(NodeId, String)] {
        &self.authors
    }

    pub(crate) fn author_slots(&self, position: usize) -> &[u32] {
        &self.author_slots[position]
    }

    /// Global temporal axis `[min start, max end]` over all finite bounds.
    pub fn temporal_axis(&self) -> Option<(i64, i64)> {
        self.axis
    }

    /// Graph postings of a keyword restricted to dataset-like nodes.
    pub fn keyword_datasets(&self, keyword: &NodeId) -> Vec<NodeId> {
        self.store
            .neighbor_set(keyword, EdgeKind::HasKeyword, Direction::In)
            .ok()
            .flatten()
            .into_iter()
            .flatten()
            .filter(|n| n.kind().is_dataset())
            .cloned()
            .collect()
    }

    /// Resolves a user-supplied term to its Keyword node.
    pub fn keyword_node(&self, term: &str) -> Option<&NodeId> {
        let normalized = crate::semantics::normalize_term(term);
        self.store.keyword_node(&normalized).or_else(|| self.store.keyword_node(term))
    }

    pub fn author_node(&self, raw: &str) -> Option<NodeId> {
        NodeId::parse(raw)
            .ok()
            .filter(|id| id.kind() == NodeKind::Author && self.store.contains(id))
    }
}
