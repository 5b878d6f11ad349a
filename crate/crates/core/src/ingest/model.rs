use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::FieldError;
use crate::geo::SpatialExtent;
use crate::graph::{Attrs, GraphNode, NodeKind};
use crate::timestamp::Timestamp;

/// Which node collection a normalized record lands in.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum RecordKind {
    #[default]
    Dataset,
    StacCollection,
}

impl RecordKind {
    pub fn node_kind(self) -> NodeKind {
        match self {
            RecordKind::Dataset => NodeKind::Dataset,
            RecordKind::StacCollection => NodeKind::StacCollection,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AuthorRef {
    pub name: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organization: Option<String>,
}

impl AuthorRef {
    /// Trims and collapses whitespace; `None` for blank names.
    pub fn new(name: &str, organization: Option<&str>) -> Option<Self> {
        let name = name.split_whitespace().collect::<Vec<_>>().join(" ");
        if name.is_empty() {
            return None;
        }
        let organization = organization
            .map(str::trim)
            .filter(|o| !o.is_empty())
            .map(str::to_owned);
        Some(Self { name, organization })
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct TemporalCoverage {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub start: Option<Timestamp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub end: Option<Timestamp>,
}

impl TemporalCoverage {
    /// `None` when both ends are open.
    pub fn new(start: Option<Timestamp>, end: Option<Timestamp>) -> Result<Option<Self>, FieldError> {
        if let (Some(s), Some(e)) = (&start, &end) {
            if s > e {
                return Err(FieldError::new(
                    "temporal_coverage",
                    format!("start {s} is after end {e}"),
                ));
            }
        }
        Ok((start.is_some() || end.is_some()).then_some(Self { start, end }))
    }
}

/// Attribute names owned by the normalized schema. Source fields with these
/// names are kept under a `source_` prefix instead.
pub(crate) const RESERVED_ATTRS: [&str; 11] = [
    "source_key",
    "organization",
    "title",
    "abstract",
    "doi",
    "publication_date",
    "temporal_coverage",
    "location",
    "authors",
    "keywords",
    "missions",
];

/// The common schema every source record is parsed into.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NormalizedDataset {
    #[serde(skip)]
    pub kind: RecordKind,
    pub source_key: String,
    pub organization: String,
    pub title: String,
    #[serde(rename = "abstract", default, skip_serializing_if = "String::is_empty")]
    pub abstract_text: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub doi: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub publication_date: Option<Timestamp>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub temporal_coverage: Option<TemporalCoverage>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub location: Option<SpatialExtent>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub authors: Vec<AuthorRef>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub keywords: Vec<String>,
    /// Mission identifiers used to match publications (STAC collections).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub missions: Vec<String>,
    /// Source fields outside the normalized schema, preserved verbatim.
    #[serde(flatten)]
    pub extra: Attrs,
}

impl NormalizedDataset {
    pub fn new(kind: RecordKind, source_key: &str, organization: &str, title: &str) -> Self {
        Self {
            kind,
            source_key: source_key.to_owned(),
            organization: organization.to_owned(),
            title: title.to_owned(),
            abstract_text: String::new(),
            doi: String::new(),
            publication_date: None,
            temporal_coverage: None,
            location: None,
            authors: Vec::new(),
            keywords: Vec::new(),
            missions: Vec::new(),
            extra: Attrs::new(),
        }
    }

    pub fn validate(&self) -> Result<(), FieldError> {
        if self.source_key.trim().is_empty() {
            return Err(FieldError::new("source_key", "empty"));
        }
        if let Some(TemporalCoverage { start: Some(s), end: Some(e) }) = &self.temporal_coverage {
            if s > e {
                return Err(FieldError::new("temporal_coverage", format!("start {s} is after end {e}")));
            }
        }
        if let Some(location) = &self.location {
            location.validate()?;
        }
        Ok(())
    }

    pub fn to_attrs(&self) -> Attrs {
        match serde_json::to_value(self) {
            Ok(Value::Object(map)) => map,
            _ => unreachable!("NormalizedDataset serializes to an object"),
        }
    }

    pub fn from_node(node: &GraphNode) -> Result<Self, FieldError> {
        let kind = match node.kind {
            NodeKind::Dataset => RecordKind::Dataset,
            NodeKind::StacCollection => RecordKind::StacCollection,
            other => return Err(FieldError::new("kind", format!("{other} is not a dataset"))),
        };
        let mut record: NormalizedDataset = serde_json::from_value(Value::Object(node.attrs.clone()))
            .map_err(|e| FieldError::new(node.id.as_str(), e.to_string()))?;
        record.kind = kind;
        Ok(record)
    }

    /// Moves a source field into `extra`, renaming it if it collides with
    /// the normalized schema.
    pub(crate) fn keep_extra(&mut self, name: &str, value: Value) {
        let key = if RESERVED_ATTRS.contains(&name) {
            format!("source_{name}")
        } else {
            name.to_owned()
        };
        self.extra.insert(key, value);
    }
}

/// A publication that links datasets, keywords and mission mentions.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub source_key: String,
    pub title: String,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub doi: String,
    #[serde(default)]
    pub keywords: Vec<String>,
    #[serde(default)]
    pub mission_mentions: Vec<String>,
    #[serde(default)]
    pub related_dataset_keys: Vec<String>,
}

impl PublicationRecord {
    pub fn to_attrs(&self) -> Attrs {
        match serde_json::to_value(self) {
            Ok(Value::Object(map)) => map,
            _ => unreachable!("PublicationRecord serializes to an object"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub source_key: String,
    pub reason: String,
}

/// Outcome of one or more ingest calls. Every `*_added` count equals the
/// change in the corresponding graph element count.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct IngestReport {
    pub corpora_added: usize,
    pub datasets_added: usize,
    pub collections_added: usize,
    pub publications_added: usize,
    pub authors_added: usize,
    pub keywords_added: usize,
    pub edges_added: usize,
    pub records_rejected: usize,
    pub rejections: Vec<Rejection>,
    /// Related-dataset references that did not resolve to a known dataset.
    pub unresolved_links: Vec<Rejection>,
}

impl IngestReport {
    pub fn reject(&mut self, source_key: impl Into<String>, reason: impl Into<String>) {
        self.records_rejected += 1;
        self.rejections.push(Rejection { source_key: source_key.into(), reason: reason.into() });
    }

    pub fn merge(&mut self, other: IngestReport) {
        self.corpora_added += other.corpora_added;
        self.datasets_added += other.datasets_added;
        self.collections_added += other.collections_added;
        self.publications_added += other.publications_added;
        self.authors_added += other.authors_added;
        self.keywords_added += other.keywords_added;
        self.edges_added += other.edges_added;
        self.records_rejected += other.records_rejected;
        self.rejections.extend(other.rejections);
        self.unresolved_links.extend(other.unresolved_links);
    }

    pub fn nodes_added(&self) -> usize {
        self.corpora_added
            + self.datasets_added
            + self.collections_added
            + self.publications_added
            + self.authors_added
            + self.keywords_added
    }

    pub fn is_empty_delta(&self) -> bool {
        self.nodes_added() == 0 && self.edges_added == 0
    }
}
