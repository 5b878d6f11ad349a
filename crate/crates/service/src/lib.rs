//! HTTP search service, harvester and operator CLI over a VESA graph dump.

pub mod config;
pub mod error;
pub mod harvest;
pub mod routes;
pub mod state;

use std::path::Path;

use tokio::net::TcpListener;
use vesa_core::graph::{self, GraphError};
use vesa_core::query::Catalog;

pub use config::ServiceConfig;
pub use routes::router;
pub use state::AppState;

#[derive(Debug, thiserror::Error)]
pub enum LoadError {
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Config(#[from] config::ConfigError),
    #[error("{0}")]
    Query(#[from] vesa_core::QueryError),
}

/// Reads a dump and prepares it for serving.
pub fn load_catalog(path: &Path, config: &ServiceConfig) -> Result<Catalog, LoadError> {
    let store = graph::load(path)?;
    let tokenizer = config.tokenizer_config()?;
    Ok(Catalog::new(store, &tokenizer, config.query_options())?)
}

/// Serves until the listener fails or the task is dropped.
pub async fn serve(listener: TcpListener, state: AppState, config: &ServiceConfig) -> std::io::Result<()> {
    axum::serve(listener, router(state, &config.cors_origins)).await
}
