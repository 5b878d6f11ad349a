use std::sync::{Arc, RwLock};

use axum::body::Bytes;
use vesa_core::query::{Catalog, SelectionState};

/// A loaded catalog plus the response bodies that never change for it.
pub struct Loaded {
    pub catalog: Catalog,
    /// Serialized record of each dataset, by catalog position.
    records: Vec<Box<str>>,
    pub main_all: Bytes,
    pub map: Bytes,
    /// `/keyword` without a term.
    pub cloud: Bytes,
}

impl Loaded {
    pub fn new(catalog: Catalog) -> Self {
        let records: Vec<Box<str>> = catalog
            .main_records()
            .result
            .iter()
            .map(|r| serde_json::to_string(r).expect("records serialize").into())
            .collect();
        debug_assert_eq!(records.len(), catalog.dataset_count());
        let overview = catalog.evaluate(&SelectionState::overview()).expect("overview is always valid");
        let map = serde_json::to_vec(&catalog.map_points(&overview)).expect("points serialize");
        let cloud = catalog.cloud_records(catalog.options().cloud_k).expect("cloud_k is validated");
        let cloud = serde_json::to_vec(&serde_json::json!({ "result": cloud })).expect("cloud serializes");
        let mut loaded = Self { catalog, records, main_all: Bytes::new(), map: map.into(), cloud: cloud.into() };
        loaded.main_all = loaded.record_list(0..loaded.records.len());
        loaded
    }

    /// `{"result": [...]}` over the given catalog positions.
    pub fn record_list(&self, positions: impl IntoIterator<Item = usize>) -> Bytes {
        let mut body = String::from("{\"result\":[");
        for (n, i) in positions.into_iter().enumerate() {
            if n > 0 {
                body.push(',');
            }
            body.push_str(&self.records[i]);
        }
        body.push_str("]}");
        body.into()
    }
}

#[derive(Clone)]
pub struct AppState {
    current: Arc<RwLock<Option<Arc<Loaded>>>>,
    pub histogram_bins: usize,
}

impl AppState {
    pub fn new(histogram_bins: usize) -> Self {
        Self { current: Arc::new(RwLock::new(None)), histogram_bins }
    }

    /// Swaps in a new catalog. Requests already holding the old one finish
    /// against it.
    pub fn install(&self, catalog: Catalog) {
        let loaded = Arc::new(Loaded::new(catalog));
        *self.current.write().unwrap_or_else(|e| e.into_inner()) = Some(loaded);
    }

    pub fn current(&self) -> Option<Arc<Loaded>> {
        self.current.read().unwrap_or_else(|e| e.into_inner()).clone()
    }
}
