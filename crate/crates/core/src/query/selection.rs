use serde::{Deserialize, Serialize};

use crate::geo::BoundingBox;
use crate::timestamp::TimeRange;

/// The cross-filter travelling with every request.
///
/// Dimensions combine conjunctively. Keywords are conjunctive among
/// themselves; authors and sources are disjunctive within their lists. The
/// empty selection is the overview of the whole collection.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SelectionState {
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub time_range: Option<TimeRange>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spatial_box: Option<BoundingBox>,
    #[serde(default)]
    pub authors: Vec<String>,
    #[serde(default)]
    pub sources: Vec<String>,
}

impl SelectionState {
    pub fn overview() -> Self {
        Self::default()
    }

    pub fn is_overview(&self) -> bool {
        self.keywords.is_empty()
            && self.time_range.is_none()
            && self.spatial_box.is_none()
            && self.authors.is_empty()
            && self.sources.is_empty()
    }

    pub fn with_keyword(mut self, term: &str) -> Self {
        self.keywords.push(term.to_owned());
        self
    }

    pub fn with_time_range(mut self, range: TimeRange) -> Self {
        self.time_range = Some(range);
        self
    }

    pub fn with_spatial_box(mut self, bbox: BoundingBox) -> Self {
        self.spatial_box = Some(bbox);
        self
    }

    pub fn with_author(mut self, author_id: &str) -> Self {
        self.authors.push(author_id.to_owned());
        self
    }

    pub fn with_source(mut self, corpus: &str) -> Self {
        self.sources.push(corpus.to_owned());
        self
    }
}
