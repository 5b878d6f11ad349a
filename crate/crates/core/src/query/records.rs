//! Wire records for the metadata, keyword and time routes.

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::catalog::Catalog;
use super::QueryError;
use crate::geo::SpatialExtent;
use crate::graph::{GraphNode, NodeId};
use crate::semantics::{related_keywords, select_cloud_keywords, KeywordScore, RelatedKeyword};
use crate::timestamp::TimeRange;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoverageRecord {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start_date: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end_date: Option<String>,
}

/// One dataset in the `/main/all` shape.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct MainRecord {
    pub id: NodeId,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location_data: Option<SpatialExtent>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doi: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dataset_publication_date: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal_coverage: Option<CoverageRecord>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<String>,
    pub dataset_title: String,
    pub organization: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RecordList {
    pub result: Vec<MainRecord>,
}

fn text(node: &GraphNode, field: &str) -> Option<String> {
    node.attrs
        .get(field)
        .and_then(Value::as_str)
        .filter(|s| !s.is_empty())
        .map(str::to_owned)
}

impl MainRecord {
    pub fn from_node(node: &GraphNode) -> Self {
        let coverage = node.attrs.get("temporal_coverage").map(|c| CoverageRecord {
            start_date: c.get("start").and_then(Value::as_str).map(str::to_owned),
            end_date: c.get("end").and_then(Value::as_str).map(str::to_owned),
        });
        let authors = node
            .attrs
            .get("authors")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
            .filter_map(|a| a.get("name").and_then(Value::as_str).map(str::to_owned))
            .collect();
        MainRecord {
            id: node.id.clone(),
            location_data: node.attrs.get("location").and_then(|v| serde_json::from_value(v.clone()).ok()),
            doi: text(node, "doi"),
            dataset_publication_date: text(node, "publication_date"),
            temporal_coverage: coverage,
            authors,
            dataset_title: text(node, "title").unwrap_or_default(),
            organization: text(node, "organization").unwrap_or_default(),
        }
    }
}

/// A keyword as shown by the word cloud.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeywordRecord {
    pub keyword: String,
    pub score: f64,
    pub document_frequency: usize,
    pub dataset_ids: Vec<NodeId>,
}

impl From<&KeywordScore<f64>> for KeywordRecord {
    fn from(s: &KeywordScore<f64>) -> Self {
        Self {
            keyword: s.term.clone(),
            score: s.score,
            document_frequency: s.document_frequency,
            dataset_ids: s.dataset_ids.clone(),
        }
    }
}

/// A clicked keyword together with the keywords sharing its datasets.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct KeywordDetail {
    #[serde(flatten)]
    pub record: KeywordRecord,
    pub related: Vec<RelatedKeyword>,
}

impl Catalog {
    /// Every dataset in id order.
    pub fn main_records(&self) -> RecordList {
        let result = self
            .datasets()
            .iter()
            .filter_map(|d| self.store().node(&d.id))
            .map(MainRecord::from_node)
            .collect();
        RecordList { result }
    }

    /// Catalog positions of datasets whose coverage intersects the closed
    /// range, in id order.
    pub fn positions_in_range(&self, range: &TimeRange) -> Result<Vec<usize>, QueryError> {
        range.validate().map_err(|e| QueryError::InvalidSelection(e.to_string()))?;
        let ids = self.store().temporal_index().intersecting(range.start.micros(), range.end.micros());
        let mut positions: Vec<usize> = ids.iter().filter_map(|id| self.position(id)).collect();
        positions.sort_by(|&a, &b| self.datasets()[a].id.cmp(&self.datasets()[b].id));
        positions.dedup();
        Ok(positions)
    }

    /// Datasets whose coverage intersects the closed range.
    pub fn datasets_in_range(&self, range: &TimeRange) -> Result<RecordList, QueryError> {
        let result = self
            .positions_in_range(range)?
            .into_iter()
            .filter_map(|i| self.store().node(&self.datasets()[i].id))
            .map(MainRecord::from_node)
            .collect();
        Ok(RecordList { result })
    }

    /// The top `k` cloud keywords by score.
    pub fn cloud_records(&self, k: usize) -> Result<Vec<KeywordRecord>, QueryError> {
        if self.scores().is_empty() {
            return Ok(Vec::new());
        }
        let top = select_cloud_keywords(self.scores(), k).map_err(|e| QueryError::InvalidSelection(e.to_string()))?;
        Ok(top.iter().map(KeywordRecord::from).collect())
    }

    pub fn keyword_detail(&self, term: &str) -> Result<KeywordDetail, QueryError> {
        let node = self.keyword_node(term).ok_or_else(|| QueryError::UnknownKeyword(term.to_owned()))?;
        let canonical = self
            .store()
            .node(node)
            .and_then(|n| n.attrs.get("term"))
            .and_then(Value::as_str)
            .unwrap_or(node.key())
            .to_owned();
        let record = match self.scores().get(&canonical) {
            Some(score) => KeywordRecord::from(score),
            None => {
                let dataset_ids = self.keyword_datasets(node);
                KeywordRecord { keyword: canonical.clone(), score: 0.0, document_frequency: dataset_ids.len(), dataset_ids }
            }
        };
        let related = related_keywords(self.store(), &canonical).map_err(|e| QueryError::Internal(e.to_string()))?;
        Ok(KeywordDetail { record, related })
    }
}
