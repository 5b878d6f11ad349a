//! STAC Collection documents.

use serde_json::{Map, Value};

use super::fields::{optional_str, optional_timestamp, parse_document, str_list};
use super::model::{AuthorRef, NormalizedDataset, RecordKind, TemporalCoverage};
use super::RecordError;
use crate::error::FieldError;
use crate::geo::SpatialExtent;
use crate::semantics::normalize_term;

pub const STAC_ORGANIZATION: &str = "DLR_EO";

const KNOWN_FIELDS: [&str; 7] = ["id", "title", "description", "keywords", "providers", "extent", "sci:doi"];

/// Parses a collection with the default organization.
pub fn parse_stac_collection(raw: &str) -> Result<NormalizedDataset, RecordError> {
    let doc = parse_document(raw)?;
    stac_from_value(&doc, STAC_ORGANIZATION)
}

pub fn stac_from_value(doc: &Value, organization: &str) -> Result<NormalizedDataset, RecordError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| RecordError::Parse("collection is not a JSON object".into()))?;
    let id = optional_str(obj, "id")?
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .ok_or_else(|| FieldError::new("id", "missing"))?;
    let title = optional_str(obj, "title")?.unwrap_or(id);

    let mut record = NormalizedDataset::new(RecordKind::StacCollection, id, organization, title);
    record.abstract_text = optional_str(obj, "description")?.unwrap_or_default().to_owned();
    record.keywords = str_list(obj, "keywords")?;
    record.authors = providers(obj)?;
    record.missions = missions(obj, id)?;
    if let Some(doi) = optional_str(obj, "sci:doi")?.map(str::trim).filter(|d| !d.is_empty()) {
        record.doi = if doi.starts_with("http") {
            doi.to_owned()
        } else {
            format!("https://doi.org/{doi}")
        };
    }

    if let Some(extent) = obj.get("extent").filter(|v| !v.is_null()) {
        let extent = extent
            .as_object()
            .ok_or_else(|| FieldError::new("extent", "expected an object"))?;
        record.location = spatial(extent)?;
        record.temporal_coverage = temporal(extent)?;
    }

    for (name, value) in obj {
        if !KNOWN_FIELDS.contains(&name.as_str()) {
            record.keep_extra(name, value.clone());
        }
    }
    Ok(record)
}

fn providers(obj: &Map<String, Value>) -> Result<Vec<AuthorRef>, FieldError> {
    let Some(items) = obj.get("providers").filter(|v| !v.is_null()) else {
        return Ok(Vec::new());
    };
    let items = items
        .as_array()
        .ok_or_else(|| FieldError::new("providers", "expected a list"))?;
    let mut authors = Vec::new();
    for item in items {
        let provider = item
            .as_object()
            .ok_or_else(|| FieldError::new("providers", "expected provider objects"))?;
        if let Some(name) = optional_str(provider, "name")? {
            authors.extend(AuthorRef::new(name, None));
        }
    }
    Ok(authors)
}

/// Mission identifiers from `summaries.mission`, `constellation` or
/// `platform` (first one present), falling back to the collection id.
fn missions(obj: &Map<String, Value>, id: &str) -> Result<Vec<String>, FieldError> {
    if let Some(summaries) = obj.get("summaries").and_then(Value::as_object) {
        for field in ["mission", "constellation", "platform"] {
            let values = match summaries.get(field) {
                Some(Value::String(s)) => vec![s.clone()],
                Some(Value::Array(_)) => str_list(summaries, field)?,
                _ => continue,
            };
            let mut terms: Vec<String> = values.iter().map(|v| normalize_term(v)).filter(|t| !t.is_empty()).collect();
            terms.dedup();
            if !terms.is_empty() {
                return Ok(terms);
            }
        }
    }
    Ok(vec![normalize_term(id)])
}

fn spatial(extent: &Map<String, Value>) -> Result<Option<crate::geo::SpatialExtent>, FieldError> {
    let Some(bboxes) = extent
        .get("spatial")
        .and_then(|s| s.get("bbox"))
        .filter(|v| !v.is_null())
    else {
        return Ok(None);
    };
    let first = bboxes
        .as_array()
        .and_then(|list| list.first())
        .ok_or_else(|| FieldError::new("extent.spatial.bbox", "expected a list of boxes"))?;
    let numbers: Option<Vec<f64>> = first
        .as_array()
        .map(|b| b.iter().map(Value::as_f64).collect::<Option<Vec<_>>>())
        .unwrap_or(None);
    let numbers = numbers.ok_or_else(|| FieldError::new("extent.spatial.bbox", "expected numbers"))?;
    let (west, south, east, north) = match numbers.as_slice() {
        [w, s, e, n] => (*w, *s, *e, *n),
        [w, s, _, e, n, _] => (*w, *s, *e, *n),
        _ => {
            return Err(FieldError::new(
                "extent.spatial.bbox",
                format!("expected 4 or 6 numbers, got {}", numbers.len()),
            ))
        }
    };
    SpatialExtent::from_bbox(west, south, east, north).map(Some)
}

fn temporal(extent: &Map<String, Value>) -> Result<Option<TemporalCoverage>, FieldError> {
    let Some(intervals) = extent
        .get("temporal")
        .and_then(|t| t.get("interval"))
        .filter(|v| !v.is_null())
    else {
        return Ok(None);
    };
    let first = intervals
        .as_array()
        .and_then(|list| list.first())
        .and_then(Value::as_array)
        .ok_or_else(|| FieldError::new("extent.temporal.interval", "expected a list of intervals"))?;
    if first.len() != 2 {
        return Err(FieldError::new("extent.temporal.interval", "interval must have two entries"));
    }
    let mut bounds = Map::new();
    bounds.insert("start".into(), first[0].clone());
    bounds.insert("end".into(), first[1].clone());
    let start = optional_timestamp(&bounds, "start")
        .map_err(|e| FieldError::new("extent.temporal.interval", e.message))?;
    let end = optional_timestamp(&bounds, "end")
        .map_err(|e| FieldError::new("extent.temporal.interval", e.message))?;
    TemporalCoverage::new(start, end)
}
