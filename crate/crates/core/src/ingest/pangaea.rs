//! PANGAEA-style dataset records.
//!
//! The accepted document is the per-dataset object returned by `/main/all`
//! (`id`, `dataset_title`, `location_data`, `temporal_coverage`, ...) plus
//! the optional `abstract` and `keywords` fields the dashboard needs.

use serde_json::{Map, Value};

use super::fields::{optional_str, optional_timestamp, parse_document, str_list, take_authors};
use super::model::{NormalizedDataset, RecordKind, TemporalCoverage};
use super::RecordError;
use crate::error::FieldError;
use crate::geo::SpatialExtent;

pub const PANGAEA_ORGANIZATION: &str = "PANGAEA";

const KNOWN_FIELDS: [&str; 10] = [
    "id",
    "dataset_title",
    "abstract",
    "keywords",
    "authors",
    "doi",
    "dataset_publication_date",
    "temporal_coverage",
    "location_data",
    "organization",
];

pub fn parse_pangaea_record(raw: &str) -> Result<NormalizedDataset, RecordError> {
    let doc = parse_document(raw)?;
    pangaea_from_value(&doc)
}

pub fn pangaea_from_value(doc: &Value) -> Result<NormalizedDataset, RecordError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| RecordError::Parse("record is not a JSON object".into()))?;

    let source_key = source_key(obj)?;
    let title = optional_str(obj, "dataset_title")?
        .ok_or_else(|| FieldError::new("dataset_title", "missing"))?;
    let organization = optional_str(obj, "organization")?.unwrap_or(PANGAEA_ORGANIZATION);

    let mut record = NormalizedDataset::new(RecordKind::Dataset, &source_key, organization, title);
    record.abstract_text = optional_str(obj, "abstract")?.unwrap_or_default().to_owned();
    record.doi = optional_str(obj, "doi")?.unwrap_or_default().trim().to_owned();
    record.publication_date = optional_timestamp(obj, "dataset_publication_date")?;
    record.keywords = keywords(obj)?;
    record.authors = take_authors(obj, "authors")?;

    if let Some(coverage) = obj.get("temporal_coverage").filter(|v| !v.is_null()) {
        let coverage = coverage
            .as_object()
            .ok_or_else(|| FieldError::new("temporal_coverage", "expected an object"))?;
        record.temporal_coverage = TemporalCoverage::new(
            optional_timestamp(coverage, "start_date")?,
            optional_timestamp(coverage, "end_date")?,
        )?;
    }

    if let Some(location) = obj.get("location_data").filter(|v| !v.is_null()) {
        let extent: SpatialExtent = serde_json::from_value(location.clone())
            .map_err(|e| FieldError::new("location_data", e.to_string()))?;
        extent.validate()?;
        record.location = Some(extent);
    }

    for (name, value) in obj {
        if !KNOWN_FIELDS.contains(&name.as_str()) {
            record.keep_extra(name, value.clone());
        }
    }
    Ok(record)
}

/// `"Dataset/495977132"`, `"495977132"` and `495977132` all yield key `495977132`.
fn source_key(obj: &Map<String, Value>) -> Result<String, FieldError> {
    let key = match obj.get("id") {
        Some(Value::String(s)) => s.rsplit_once('/').map_or(s.as_str(), |(_, k)| k).trim().to_owned(),
        Some(Value::Number(n)) => n.to_string(),
        Some(_) => return Err(FieldError::new("id", "expected a string or number")),
        None => return Err(FieldError::new("id", "missing")),
    };
    if key.is_empty() {
        return Err(FieldError::new("id", "empty"));
    }
    Ok(key)
}

/// Keywords as a list, or a single `;`-separated string.
fn keywords(obj: &Map<String, Value>) -> Result<Vec<String>, FieldError> {
    match obj.get("keywords") {
        Some(Value::String(s)) => Ok(s
            .split(';')
            .map(str::trim)
            .filter(|k| !k.is_empty())
            .map(str::to_owned)
            .collect()),
        _ => str_list(obj, "keywords"),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::timestamp::Timestamp;

    const LISTING: &str = r#"{
        "id": "Dataset/495977132",
        "location_data": {
            "west_bound_longitude": -58.0365,
            "east_bound_longitude": -45.688,
            "north_bound_latitude": 61.4639,
            "south_bound_latitude": 50.208,
            "mean_latitude": 56.62752222222233,
            "mean_longitude": -50.69916666666666
        },
        "doi": "https://doi.org/10.1594/PANGAEA.958142",
        "dataset_publication_date": "2023-11-13T06:33:47+00:00",
        "temporal_coverage": {
            "start_date": "1999-07-31T23:00:00Z",
            "end_date": "1999-08-01T23:00:00.000Z"
        },
        "authors": ["Franziska Tell"],
        "dataset_title": "Individual shell sizes",
        "organization": "PANGAEA"
    }"#;

    #[test]
    fn parses_listing_record() {
        let record = parse_pangaea_record(LISTING).unwrap();
        assert_eq!(record.source_key, "495977132");
        assert_eq!(record.organization, "PANGAEA");
        let coverage = record.temporal_coverage.as_ref().unwrap();
        assert_eq!(coverage.start, Some(Timestamp::parse("1999-07-31T23:00:00Z").unwrap()));
        assert_eq!(coverage.end, Some(Timestamp::parse("1999-08-01T23:00:00Z").unwrap()));
        assert_eq!(record.authors.len(), 1);
        assert_eq!(record.authors[0].name, "Franziska Tell");
        let location = record.location.as_ref().unwrap();
        assert_eq!(location.west_bound_longitude, -58.0365);
        assert_eq!(location.mean_latitude, Some(56.62752222222233));
        assert!(record.keywords.is_empty());
        assert!(record.extra.is_empty());
    }

    #[test]
    fn missing_location_is_absent() {
        let record = parse_pangaea_record(r#"{"id": 7, "dataset_title": "t"}"#).unwrap();
        assert_eq!(record.source_key, "7");
        assert!(record.location.is_none());
        assert!(record.temporal_coverage.is_none());
        assert_eq!(record.organization, "PANGAEA");
    }

    #[test]
    fn reversed_coverage_is_field_error() {
        let raw = r#"{"id": "1", "dataset_title": "t",
            "temporal_coverage": {"start_date": "2001-01-01T00:00:00Z", "end_date": "2000-01-01T00:00:00Z"}}"#;
        assert!(matches!(parse_pangaea_record(raw), Err(RecordError::Field(_))));
    }

    #[test]
    fn malformed_json_is_parse_error() {
        assert!(matches!(parse_pangaea_record("{\"id\": "), Err(RecordError::Parse(_))));
        assert!(matches!(parse_pangaea_record("[1, 2]"), Err(RecordError::Parse(_))));
    }

    #[test]
    fn keyword_string_and_extras() {
        let raw = r#"{"id": "1", "dataset_title": "t", "keywords": "flood events; Temperature ;",
            "title": "shadow", "project": "X"}"#;
        let record = parse_pangaea_record(raw).unwrap();
        assert_eq!(record.keywords, ["flood events", "Temperature"]);
        assert_eq!(record.title, "t");
        assert_eq!(record.extra.get("source_title").and_then(Value::as_str), Some("shadow"));
        assert_eq!(record.extra.get("project").and_then(Value::as_str), Some("X"));
    }
}
