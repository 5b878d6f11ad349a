//! Per-kind attribute schemas checked on insertion and on load.
//!
//! Only the declared fields are type-checked; anything else a source ships
//! is kept verbatim.

use serde_json::Value;

use super::{Attrs, EdgeKind, GraphError, NodeKind};
use crate::geo::SpatialExtent;
use crate::timestamp::Timestamp;

pub const PROVENANCE: &str = "provenance";
pub const PROVENANCE_DIRECT: &str = "direct";
pub const PROVENANCE_MEDIATED: &str = "mediated";
pub const PROVENANCE_EXTRACTED: &str = "extracted";

pub fn validate_node(kind: NodeKind, attrs: &Attrs) -> Result<(), GraphError> {
    let v = Checker { kind, attrs };
    match kind {
        NodeKind::Corpus => {
            v.required_str("name")?;
        }
        NodeKind::Dataset | NodeKind::StacCollection => {
            v.required_str("title")?;
            v.required_str("organization")?;
            v.optional_str("source_key")?;
            v.optional_str("abstract")?;
            v.optional_str("doi")?;
            v.optional_timestamp("publication_date")?;
            v.optional_str_list("keywords")?;
            v.optional_str_list("missions")?;
            v.temporal_coverage()?;
            v.location()?;
            v.authors()?;
        }
        NodeKind::Author => {
            v.required_str("name")?;
            v.optional_str("organization")?;
        }
        NodeKind::Keyword => {
            v.required_str("term")?;
            if let Some(score) = attrs.get("score") {
                match score.as_f64() {
                    Some(s) if s >= 0.0 && s.is_finite() => {}
                    _ => return Err(v.violation("score must be a non-negative number")),
                }
            }
            if let Some(df) = attrs.get("document_frequency") {
                if df.as_u64().is_none() {
                    return Err(v.violation("document_frequency must be a non-negative integer"));
                }
            }
        }
        NodeKind::Publication => {
            v.required_str("title")?;
            v.optional_str("source_key")?;
            v.optional_str("doi")?;
            v.optional_str_list("keywords")?;
            v.optional_str_list("mission_mentions")?;
            v.optional_str_list("related_dataset_keys")?;
        }
    }
    Ok(())
}

pub fn validate_edge(kind: EdgeKind, attrs: &Attrs) -> Result<(), GraphError> {
    match attrs.get(PROVENANCE) {
        None => Ok(()),
        Some(Value::String(p))
            if [PROVENANCE_DIRECT, PROVENANCE_MEDIATED, PROVENANCE_EXTRACTED].contains(&p.as_str()) =>
        {
            Ok(())
        }
        Some(other) => Err(GraphError::SchemaViolation(format!(
            "{kind} edge: unsupported provenance {other}"
        ))),
    }
}

struct Checker<'a> {
    kind: NodeKind,
    attrs: &'a Attrs,
}

impl Checker<'_> {
    fn violation(&self, message: impl AsRef<str>) -> GraphError {
        GraphError::SchemaViolation(format!("{} node: {}", self.kind, message.as_ref()))
    }

    fn required_str(&self, field: &str) -> Result<(), GraphError> {
        match self.attrs.get(field) {
            Some(Value::String(_)) => Ok(()),
            Some(_) => Err(self.violation(format!("{field} must be a string"))),
            None => Err(self.violation(format!("missing required field {field}"))),
        }
    }

    fn optional_str(&self, field: &str) -> Result<(), GraphError> {
        match self.attrs.get(field) {
            None | Some(Value::String(_)) => Ok(()),
            Some(_) => Err(self.violation(format!("{field} must be a string"))),
        }
    }

    fn optional_str_list(&self, field: &str) -> Result<(), GraphError> {
        match self.attrs.get(field) {
            None => Ok(()),
            Some(Value::Array(items)) if items.iter().all(Value::is_string) => Ok(()),
            Some(_) => Err(self.violation(format!("{field} must be a list of strings"))),
        }
    }

    fn optional_timestamp(&self, field: &str) -> Result<Option<Timestamp>, GraphError> {
        match self.attrs.get(field) {
            None => Ok(None),
            Some(value) => timestamp_value(value)
                .map(Some)
                .map_err(|m| self.violation(format!("{field}: {m}"))),
        }
    }

    fn temporal_coverage(&self) -> Result<(), GraphError> {
        let Some(coverage) = self.attrs.get("temporal_coverage") else {
            return Ok(());
        };
        let Value::Object(coverage) = coverage else {
            return Err(self.violation("temporal_coverage must be an object"));
        };
        let mut bounds = [None, None];
        for (slot, field) in bounds.iter_mut().zip(["start", "end"]) {
            if let Some(value) = coverage.get(field) {
                *slot = Some(
                    timestamp_value(value)
                        .map_err(|m| self.violation(format!("temporal_coverage.{field}: {m}")))?,
                );
            }
        }
        if let [Some(start), Some(end)] = &bounds {
            if start > end {
                return Err(self.violation(format!(
                    "temporal_coverage start {start} is after end {end}"
                )));
            }
        }
        Ok(())
    }

    fn location(&self) -> Result<(), GraphError> {
        let Some(location) = self.attrs.get("location") else {
            return Ok(());
        };
        let extent: SpatialExtent = serde_json::from_value(location.clone())
            .map_err(|e| self.violation(format!("location: {e}")))?;
        extent.validate().map_err(|e| self.violation(format!("location: {e}")))
    }

    fn authors(&self) -> Result<(), GraphError> {
        let Some(authors) = self.attrs.get("authors") else {
            return Ok(());
        };
        let ok = authors.as_array().is_some_and(|items| {
            items.iter().all(|a| {
                a.get("name").is_some_and(Value::is_string)
                    && a.get("organization").is_none_or(Value::is_string)
            })
        });
        if ok {
            Ok(())
        } else {
            Err(self.violation("authors must be a list of {name, organization?} records"))
        }
    }
}

fn timestamp_value(value: &Value) -> Result<Timestamp, String> {
    let raw = value.as_str().ok_or_else(|| "expected an RFC 3339 string".to_string())?;
    Timestamp::parse(raw).map_err(|e| e.message)
}
