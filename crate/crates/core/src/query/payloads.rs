//! Coordinated-view payloads derived from one filter result.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};

use super::catalog::Catalog;
use super::evaluate::FilterResult;
use super::histogram::{BinUnit, Histogram};
use super::selection::SelectionState;
use super::QueryError;
use crate::graph::{Direction, EdgeKind, NodeId};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CloudEntry {
    pub term: String,
    /// Word size: number of filtered datasets carrying the term.
    pub weight: usize,
    pub score: f64,
    /// True when the cloud shows keywords related to a selection.
    pub related: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MapPoint {
    pub dataset_id: NodeId,
    pub lat: f64,
    pub lon: f64,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ChordAuthor {
    pub id: NodeId,
    pub name: String,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Chord {
    pub authors: Vec<ChordAuthor>,
    /// `matrix[i][j]`: filtered datasets authored by both `i` and `j`.
    pub matrix: Vec<Vec<u32>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ListRow {
    pub dataset_id: NodeId,
    pub title: String,
    pub authors: Vec<String>,
    pub doi: String,
    pub source: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AbstractRecord {
    pub id: NodeId,
    #[serde(rename = "abstract")]
    pub abstract_text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetList {
    pub total: usize,
    pub rows: Vec<ListRow>,
    #[serde(rename = "abstract", default, skip_serializing_if = "Option::is_none")]
    pub abstract_record: Option<AbstractRecord>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Page {
    pub offset: usize,
    pub limit: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VisualizationPayloads {
    pub cloud: Vec<CloudEntry>,
    pub map_points: Vec<MapPoint>,
    pub histogram: Histogram,
    pub chord: Chord,
    pub list_rows: DatasetList,
}

impl Catalog {
    /// One point per located filtered dataset: the source mean when given,
    /// otherwise the bounding-box midpoint.
    pub fn map_points(&self, result: &FilterResult) -> Vec<MapPoint> {
        self.result_positions(result)
            .into_iter()
            .filter_map(|i| {
                let dataset = &self.datasets()[i];
                dataset.point.map(|p| MapPoint {
                    dataset_id: dataset.id.clone(),
                    lat: p.lat,
                    lon: p.lon,
                    source: dataset.organization.clone(),
                })
            })
            .collect()
    }

    /// Co-authorship counts among the authors of the filtered datasets.
    pub fn coauthor_matrix(&self, result: &FilterResult) -> Chord {
        let positions = self.result_positions(result);
        let table = self.author_table();
        let mut local = vec![u32::MAX; table.len()];
        for &i in &positions {
            for &slot in self.author_slots(i) {
                local[slot as usize] = 0;
            }
        }
        let mut authors = Vec::new();
        for (slot, (id, name)) in table.iter().enumerate() {
            if local[slot] == 0 {
                local[slot] = authors.len() as u32;
                authors.push(ChordAuthor { id: id.clone(), name: name.clone() });
            }
        }

        let n = authors.len();
        let mut matrix = vec![vec![0u32; n]; n];
        for &i in &positions {
            let members = self.author_slots(i);
            for (k, &a) in members.iter().enumerate() {
                for &b in &members[k + 1..] {
                    let (a, b) = (local[a as usize] as usize, local[b as usize] as usize);
                    matrix[a][b] += 1;
                    matrix[b][a] += 1;
                }
            }
        }
        Chord { authors, matrix }
    }

    /// Without selected keywords: the top-k TF-IDF keywords weighted by
    /// their frequency inside the filtered set. With selected keywords: the
    /// keywords co-occurring with all of them inside the filtered set.
    /// Entries with zero weight are dropped.
    pub fn keyword_cloud(&self, result: &FilterResult, selected: &[String], k: usize) -> Vec<CloudEntry> {
        if result.dataset_ids.is_empty() {
            return Vec::new();
        }
        if selected.is_empty() {
            let members = self.result_flags(result);
            return self
                .ranked_terms()
                .iter()
                .take(k)
                .filter_map(|(term, score, at)| {
                    let weight = at.iter().filter(|&&i| members[i]).count();
                    (weight > 0).then(|| CloudEntry { term: term.clone(), weight, score: *score, related: false })
                })
                .collect();
        }

        let selected_ids: BTreeSet<&NodeId> = selected.iter().filter_map(|t| self.keyword_node(t)).collect();
        let mut counts: BTreeMap<&NodeId, usize> = BTreeMap::new();
        for dataset in &result.dataset_ids {
            let keywords = self
                .store()
                .neighbor_set(dataset, EdgeKind::HasKeyword, Direction::Out)
                .ok()
                .flatten()
                .into_iter()
                .flatten();
            // A dataset joins the co-occurrence only if it carries every selected term.
            let owned: BTreeSet<&NodeId> = keywords.collect();
            if !selected_ids.iter().all(|s| owned.contains(s)) {
                continue;
            }
            for keyword in owned.into_iter().filter(|k| !selected_ids.contains(k)) {
                *counts.entry(keyword).or_default() += 1;
            }
        }
        let mut entries: Vec<CloudEntry> = counts
            .into_iter()
            .map(|(id, weight)| {
                let term = self
                    .store()
                    .node(id)
                    .and_then(|n| n.attrs.get("term"))
                    .and_then(|v| v.as_str())
                    .unwrap_or(id.key())
                    .to_owned();
                let score = self.scores().get(&term).map_or(0.0, |s| s.score);
                CloudEntry { term, weight, score, related: true }
            })
            .collect();
        entries.sort_by(|a, b| b.weight.cmp(&a.weight).then_with(|| a.term.cmp(&b.term)));
        entries.truncate(k);
        entries
    }

    pub fn abstract_record(&self, id: &NodeId) -> Result<AbstractRecord, QueryError> {
        self.dataset(id)
            .map(|d| AbstractRecord { id: d.id.clone(), abstract_text: d.abstract_text.clone() })
            .ok_or_else(|| QueryError::UnknownDataset(id.to_string()))
    }

    /// Rows sorted by title (then id), optionally paged, with the abstract of
    /// one dataset attached on request.
    pub fn dataset_list(
        &self,
        result: &FilterResult,
        abstract_for: Option<&NodeId>,
        page: Page,
    ) -> Result<DatasetList, QueryError> {
        let abstract_record = abstract_for.map(|id| self.abstract_record(id)).transpose()?;
        let members = self.result_flags(result);
        let positions = self.title_order().iter().copied().filter(|&i| members[i]);
        let rows = positions
            .into_iter()
            .skip(page.offset)
            .take(page.limit.unwrap_or(usize::MAX))
            .map(|i| {
                let d = &self.datasets()[i];
                ListRow {
                    dataset_id: d.id.clone(),
                    title: d.title.clone(),
                    authors: d.authors.iter().map(|(_, name)| name.clone()).collect(),
                    doi: d.doi.clone(),
                    source: d.organization.clone(),
                }
            })
            .collect();
        Ok(DatasetList { total: result.total, rows, abstract_record })
    }

    /// Every coordinated view for one selection.
    pub fn payloads(
        &self,
        selection: &SelectionState,
        result: &FilterResult,
        bin: BinUnit,
        page: Page,
    ) -> Result<VisualizationPayloads, QueryError> {
        Ok(VisualizationPayloads {
            cloud: self.keyword_cloud(result, &selection.keywords, self.options().cloud_k),
            map_points: self.map_points(result),
            histogram: self.temporal_histogram(result, bin)?,
            chord: self.coauthor_matrix(result),
            list_rows: self.dataset_list(result, None, page)?,
        })
    }
}
