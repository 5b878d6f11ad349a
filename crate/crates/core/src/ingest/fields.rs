//! Field accessors shared by the source parsers.

use serde_json::{Map, Value};

use super::model::AuthorRef;
use super::RecordError;
use crate::error::FieldError;
use crate::timestamp::Timestamp;

pub(crate) fn parse_document(raw: &str) -> Result<Value, RecordError> {
    serde_json::from_str(raw).map_err(|e| RecordError::Parse(e.to_string()))
}

/// `null` counts as absent.
pub(crate) fn optional_str<'a>(obj: &'a Map<String, Value>, field: &str) -> Result<Option<&'a str>, FieldError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(None),
        Some(Value::String(s)) => Ok(Some(s.as_str())),
        Some(_) => Err(FieldError::new(field, "expected a string")),
    }
}

pub(crate) fn optional_timestamp(obj: &Map<String, Value>, field: &str) -> Result<Option<Timestamp>, FieldError> {
    match optional_str(obj, field)? {
        None => Ok(None),
        Some(s) if s.trim().is_empty() => Ok(None),
        Some(s) => Timestamp::parse(s)
            .map(Some)
            .map_err(|e| FieldError::new(field, e.message)),
    }
}

pub(crate) fn str_list(obj: &Map<String, Value>, field: &str) -> Result<Vec<String>, FieldError> {
    match obj.get(field) {
        None | Some(Value::Null) => Ok(Vec::new()),
        Some(Value::Array(items)) => items
            .iter()
            .filter(|v| !v.is_null())
            .map(|v| {
                v.as_str()
                    .map(|s| s.trim().to_owned())
                    .ok_or_else(|| FieldError::new(field, "expected a list of strings"))
            })
            .filter(|s| s.as_ref().map_or(true, |s| !s.is_empty()))
            .collect(),
        Some(_) => Err(FieldError::new(field, "expected a list of strings")),
    }
}

/// Authors given as plain names or `{name, organization}` objects.
pub(crate) fn take_authors(obj: &Map<String, Value>, field: &str) -> Result<Vec<AuthorRef>, FieldError> {
    let items = match obj.get(field) {
        None | Some(Value::Null) => return Ok(Vec::new()),
        Some(Value::Array(items)) => items,
        Some(_) => return Err(FieldError::new(field, "expected a list")),
    };
    let mut authors = Vec::new();
    for item in items {
        let author = match item {
            Value::String(name) => AuthorRef::new(name, None),
            Value::Object(o) => {
                let name = optional_str(o, "name")?
                    .ok_or_else(|| FieldError::new(field, "author without a name"))?;
                AuthorRef::new(name, optional_str(o, "organization")?)
            }
            _ => return Err(FieldError::new(field, "expected names or {name, organization} objects")),
        };
        authors.extend(author);
    }
    Ok(authors)
}
