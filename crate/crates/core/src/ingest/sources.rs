//! Source configuration and on-disk document directories.
//!
//! Each source owns a directory `<root>/<name>/` holding one JSON document
//! per file. Files are read in name order so builds are reproducible.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::model::{NormalizedDataset, PublicationRecord, Rejection};
use super::{pangaea_from_value, publication_from_value, stac_from_value, IngestError, PANGAEA_ORGANIZATION, STAC_ORGANIZATION};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SourceKind {
    Pangaea,
    Stac,
    Publication,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SourceConfig {
    pub name: String,
    pub kind: SourceKind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub endpoint: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub organization: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub limit: Option<usize>,
}

impl SourceConfig {
    pub fn organization(&self) -> &str {
        match (&self.organization, self.kind) {
            (Some(org), _) => org,
            (None, SourceKind::Stac) => STAC_ORGANIZATION,
            (None, _) => PANGAEA_ORGANIZATION,
        }
    }

    fn validate(&self) -> Result<(), String> {
        if self.name.trim().is_empty() || self.name.contains(['/', '\\']) || self.name.starts_with('.') {
            return Err(format!("invalid source name {:?}", self.name));
        }
        if self.limit == Some(0) {
            return Err(format!("source {}: limit must be at least 1", self.name));
        }
        Ok(())
    }
}

pub fn read_sources_config(path: &Path) -> Result<Vec<SourceConfig>, IngestError> {
    let source_err = |message: String| IngestError::Source { path: path.display().to_string(), message };
    let text = fs::read_to_string(path).map_err(|e| source_err(e.to_string()))?;
    let sources: Vec<SourceConfig> = serde_json::from_str(&text).map_err(|e| source_err(e.to_string()))?;
    let mut seen = std::collections::BTreeSet::new();
    for source in &sources {
        source.validate().map_err(source_err)?;
        if !seen.insert(source.name.as_str()) {
            return Err(source_err(format!("duplicate source name {:?}", source.name)));
        }
    }
    Ok(sources)
}

/// `(file name, contents)` for every `*.json` file of the source, sorted.
pub fn load_source_documents(root: &Path, source: &SourceConfig) -> Result<Vec<(String, String)>, IngestError> {
    let dir = root.join(&source.name);
    let io_err = |e: std::io::Error| IngestError::Source { path: dir.display().to_string(), message: e.to_string() };
    let mut names = Vec::new();
    for entry in fs::read_dir(&dir).map_err(io_err)? {
        let path = entry.map_err(io_err)?.path();
        if path.is_file() && path.extension().is_some_and(|e| e == "json") {
            names.push(path);
        }
    }
    names.sort();
    names
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).map_err(io_err)?;
            let name = path.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            Ok((name, text))
        })
        .collect()
}

#[derive(Clone, Debug, Default)]
pub struct ParsedSource {
    pub datasets: Vec<NormalizedDataset>,
    pub publications: Vec<PublicationRecord>,
    pub rejections: Vec<Rejection>,
    pub documents_seen: usize,
}

/// Parses documents of one source. A document may hold a single record or
/// a listing (`{"result": [...]}` / `{"collections": [...]}` / an array).
pub fn parse_source_documents(source: &SourceConfig, documents: &[(String, String)]) -> ParsedSource {
    let mut parsed = ParsedSource::default();
    for (name, text) in documents {
        let doc: Value = match serde_json::from_str(text) {
            Ok(doc) => doc,
            Err(e) => {
                parsed.documents_seen += 1;
                parsed.rejections.push(Rejection { source_key: name.clone(), reason: format!("parse error: {e}") });
                continue;
            }
        };
        let records = match doc {
            Value::Array(items) => items,
            Value::Object(ref obj) if obj.get("result").is_some_and(Value::is_array) => {
                obj["result"].as_array().cloned().unwrap_or_default()
            }
            Value::Object(ref obj) if obj.get("collections").is_some_and(Value::is_array) => {
                obj["collections"].as_array().cloned().unwrap_or_default()
            }
            other => vec![other],
        };
        for (i, record) in records.iter().enumerate() {
            parsed.documents_seen += 1;
            let label = if records.len() > 1 { format!("{name}#{i}") } else { name.clone() };
            let key_hint = record
                .get("id")
                .or_else(|| record.get("source_key"))
                .map(|v| v.as_str().map(str::to_owned).unwrap_or_else(|| v.to_string()))
                .unwrap_or(label);
            let outcome = match source.kind {
                SourceKind::Pangaea => pangaea_from_value(record).map(|mut d| {
                    if d.organization == PANGAEA_ORGANIZATION {
                        if let Some(org) = &source.organization {
                            d.organization = org.clone();
                        }
                    }
                    parsed.datasets.push(d)
                }),
                SourceKind::Stac => {
                    stac_from_value(record, source.organization()).map(|d| parsed.datasets.push(d))
                }
                SourceKind::Publication => {
                    publication_from_value(record).map(|p| parsed.publications.push(p))
                }
            };
            if let Err(e) = outcome {
                parsed.rejections.push(Rejection { source_key: key_hint, reason: e.to_string() });
            }
        }
    }
    parsed
}
