use serde_json::Value;

use super::fields::{optional_str, parse_document, str_list};
use super::model::PublicationRecord;
use super::RecordError;
use crate::error::FieldError;
use crate::semantics::normalize_term;

pub fn parse_publication(raw: &str) -> Result<PublicationRecord, RecordError> {
    let doc = parse_document(raw)?;
    publication_from_value(&doc)
}

/// Keywords and mission mentions come out lowercased, trimmed and
/// whitespace-collapsed, without duplicates.
pub fn publication_from_value(doc: &Value) -> Result<PublicationRecord, RecordError> {
    let obj = doc
        .as_object()
        .ok_or_else(|| RecordError::Parse("publication is not a JSON object".into()))?;
    let source_key = optional_str(obj, "source_key")?
        .or(optional_str(obj, "id")?)
        .map(str::trim)
        .filter(|k| !k.is_empty())
        .ok_or_else(|| FieldError::new("source_key", "missing"))?
        .to_owned();
    let title = optional_str(obj, "title")?.unwrap_or_default().trim().to_owned();
    let normalized = |field: &str| -> Result<Vec<String>, FieldError> {
        let mut out: Vec<String> = Vec::new();
        for term in str_list(obj, field)?.iter().map(|s| normalize_term(s)) {
            if !term.is_empty() && !out.contains(&term) {
                out.push(term);
            }
        }
        Ok(out)
    };
    Ok(PublicationRecord {
        title: if title.is_empty() { source_key.clone() } else { title },
        source_key,
        doi: optional_str(obj, "doi")?.unwrap_or_default().trim().to_owned(),
        keywords: normalized("keywords")?,
        mission_mentions: normalized("mission_mentions")?,
        related_dataset_keys: str_list(obj, "related_dataset_keys")?,
    })
}
