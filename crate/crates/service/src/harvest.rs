//! Fetches source listings into a local cache that `vesa build` reads.
//!
//! Each source lands in `<cache>/<name>/page-NNNNN.json`. A `.complete`
//! marker is written last; a source that has one is not fetched again.

use std::path::Path;
use std::time::Duration;

use reqwest::{Client, StatusCode, Url};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;
use tokio::task::JoinSet;
use vesa_core::ingest::{SourceConfig, SourceKind};

pub const COMPLETE_MARKER: &str = ".complete";

#[derive(Debug, Error)]
pub enum HarvestError {
    #[error("source {source_name}: no endpoint configured")]
    NoEndpoint { source_name: String },
    #[error("{url}: {message}")]
    Http { url: String, message: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

#[derive(Clone, Debug)]
pub struct HarvestOptions {
    /// Retries after the first attempt.
    pub retries: u32,
    /// Delay before the first retry; doubled for each further retry.
    pub backoff: Duration,
    pub concurrency: usize,
    pub page_size: usize,
    pub timeout: Duration,
}

impl Default for HarvestOptions {
    fn default() -> Self {
        Self {
            retries: 3,
            backoff: Duration::from_secs(1),
            concurrency: 4,
            page_size: 100,
            timeout: Duration::from_secs(60),
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct SourceHarvest {
    pub name: String,
    pub pages: usize,
    pub records: usize,
    /// Served from an earlier complete harvest.
    pub cached: bool,
}

pub struct Harvester {
    client: Client,
    options: HarvestOptions,
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> HarvestError + '_ {
    move |source| HarvestError::Io { path: path.display().to_string(), source }
}

/// Records carried by one fetched document.
fn record_count(doc: &Value) -> usize {
    match doc {
        Value::Array(items) => items.len(),
        Value::Object(obj) => ["result", "collections", "features"]
            .iter()
            .find_map(|k| obj.get(*k).and_then(Value::as_array))
            .map_or(1, Vec::len),
        _ => 0,
    }
}

fn next_link(doc: &Value) -> Option<String> {
    doc.get("links")?
        .as_array()?
        .iter()
        .find(|l| l.get("rel").and_then(Value::as_str) == Some("next"))?
        .get("href")?
        .as_str()
        .map(str::to_owned)
}

impl Harvester {
    pub fn new(options: HarvestOptions) -> Result<Self, HarvestError> {
        let client = Client::builder()
            .timeout(options.timeout)
            .user_agent(concat!("vesa/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| HarvestError::Http { url: String::new(), message: e.to_string() })?;
        Ok(Self { client, options })
    }

    pub async fn harvest_all(&self, sources: &[SourceConfig], cache: &Path) -> Result<Vec<SourceHarvest>, HarvestError> {
        let mut reports = Vec::with_capacity(sources.len());
        for source in sources {
            reports.push(self.harvest(source, cache).await?);
        }
        Ok(reports)
    }

    pub async fn harvest(&self, source: &SourceConfig, cache: &Path) -> Result<SourceHarvest, HarvestError> {
        let dir = cache.join(&source.name);
        let marker = dir.join(COMPLETE_MARKER);
        if marker.is_file() {
            let pages = std::fs::read_dir(&dir)
                .map_err(io_err(&dir))?
                .filter_map(Result::ok)
                .filter(|e| e.path().extension().is_some_and(|x| x == "json"))
                .count();
            return Ok(SourceHarvest { name: source.name.clone(), pages, records: 0, cached: true });
        }
        let endpoint = source
            .endpoint
            .as_deref()
            .ok_or_else(|| HarvestError::NoEndpoint { source_name: source.name.clone() })?;
        if dir.exists() {
            tokio::fs::remove_dir_all(&dir).await.map_err(io_err(&dir))?;
        }
        tokio::fs::create_dir_all(&dir).await.map_err(io_err(&dir))?;

        let docs = match source.kind {
            SourceKind::Stac => self.follow_next_links(endpoint, source.limit).await?,
            SourceKind::Pangaea => self.offset_pages(endpoint, source.limit).await?,
            SourceKind::Publication => vec![self.fetch_json(endpoint).await?],
        };
        let mut report = SourceHarvest { name: source.name.clone(), ..Default::default() };
        for (i, doc) in docs.iter().enumerate() {
            let path = dir.join(format!("page-{:05}.json", i + 1));
            let body = serde_json::to_vec_pretty(doc).expect("json value serializes");
            tokio::fs::write(&path, body).await.map_err(io_err(&path))?;
            report.pages += 1;
            report.records += record_count(doc);
        }
        tokio::fs::write(&marker, b"").await.map_err(io_err(&marker))?;
        Ok(report)
    }

    async fn fetch_json(&self, url: &str) -> Result<Value, HarvestError> {
        fetch_with_retry(&self.client, &self.options, url).await
    }

    async fn follow_next_links(&self, endpoint: &str, limit: Option<usize>) -> Result<Vec<Value>, HarvestError> {
        let mut docs = Vec::new();
        let mut seen = 0;
        let mut url = Some(endpoint.to_owned());
        let mut visited = std::collections::HashSet::new();
        while let Some(current) = url.take() {
            if !visited.insert(current.clone()) {
                break;
            }
            let doc = self.fetch_json(&current).await?;
            seen += record_count(&doc);
            url = next_link(&doc).map(|href| resolve(&current, &href));
            docs.push(doc);
            if limit.is_some_and(|l| seen >= l) {
                break;
            }
        }
        Ok(docs)
    }

    /// Fetches `offset`/`limit` pages in waves of `concurrency` until a page
    /// comes back short.
    async fn offset_pages(&self, endpoint: &str, limit: Option<usize>) -> Result<Vec<Value>, HarvestError> {
        let page_size = self.options.page_size.max(1);
        let wanted = limit.unwrap_or(usize::MAX);
        let mut docs = Vec::new();
        let mut offset = 0;
        'waves: while offset < wanted {
            let mut wave = JoinSet::new();
            for slot in 0..self.options.concurrency.max(1) {
                let start = offset + slot * page_size;
                if start >= wanted {
                    break;
                }
                let url = page_url(endpoint, start, page_size.min(wanted - start))?;
                let (client, options) = (self.client.clone(), self.options.clone());
                wave.spawn(async move { (slot, fetch_with_retry(&client, &options, &url).await) });
            }
            let launched = wave.len();
            let mut pages: Vec<(usize, Value)> = Vec::with_capacity(launched);
            while let Some(joined) = wave.join_next().await {
                let (slot, page) = joined.map_err(|e| HarvestError::Http { url: endpoint.into(), message: e.to_string() })?;
                pages.push((slot, page?));
            }
            pages.sort_by_key(|(slot, _)| *slot);
            for (_, page) in pages {
                let count = record_count(&page);
                if count > 0 {
                    docs.push(page);
                }
                if count < page_size {
                    break 'waves;
                }
            }
            offset += launched * page_size;
        }
        Ok(docs)
    }
}

fn resolve(base: &str, href: &str) -> String {
    Url::parse(base)
        .and_then(|b| b.join(href))
        .map(String::from)
        .unwrap_or_else(|_| href.to_owned())
}

fn page_url(endpoint: &str, offset: usize, limit: usize) -> Result<String, HarvestError> {
    let mut url = Url::parse(endpoint)
        .map_err(|e| HarvestError::Http { url: endpoint.into(), message: e.to_string() })?;
    url.query_pairs_mut()
        .append_pair("offset", &offset.to_string())
        .append_pair("limit", &limit.to_string());
    Ok(url.into())
}

fn retryable(status: StatusCode) -> bool {
    status.is_server_error() || status == StatusCode::TOO_MANY_REQUESTS || status == StatusCode::REQUEST_TIMEOUT
}

async fn fetch_with_retry(client: &Client, options: &HarvestOptions, url: &str) -> Result<Value, HarvestError> {
    let fail = |message: String| HarvestError::Http { url: url.to_owned(), message };
    let mut attempt = 0;
    loop {
        let outcome = match client.get(url).send().await {
            Ok(resp) if resp.status().is_success() => {
                return resp.json::<Value>().await.map_err(|e| fail(format!("invalid JSON: {e}")));
            }
            Ok(resp) if !retryable(resp.status()) => return Err(fail(format!("HTTP {}", resp.status()))),
            Ok(resp) => format!("HTTP {}", resp.status()),
            Err(e) => e.to_string(),
        };
        if attempt >= options.retries {
            return Err(fail(format!("{outcome} after {} attempts", attempt + 1)));
        }
        tracing::warn!(url, attempt, "{outcome}; retrying");
        tokio::time::sleep(options.backoff * 2u32.saturating_pow(attempt)).await;
        attempt += 1;
    }
}
