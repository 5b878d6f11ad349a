#![allow(dead_code)]

#[path = "../../../core/tests/common/mod.rs"]
pub mod common;

use std::net::SocketAddr;

use tokio::net::TcpListener;
use vesa_core::query::Catalog;
use vesa_service::{AppState, ServiceConfig};

pub struct Server {
    pub base: String,
    pub state: AppState,
    pub client: reqwest::Client,
}

impl Server {
    pub fn url(&self, path: &str) -> String {
        format!("{}{path}", self.base)
    }

    pub async fn get(&self, path: &str) -> (u16, serde_json::Value) {
        let resp = self.client.get(self.url(path)).send().await.unwrap();
        let status = resp.status().as_u16();
        (status, resp.json().await.unwrap())
    }

    pub async fn post(&self, path: &str, body: &str) -> (u16, serde_json::Value) {
        let resp = self
            .client
            .post(self.url(path))
            .header("content-type", "application/json")
            .body(body.to_owned())
            .send()
            .await
            .unwrap();
        let status = resp.status().as_u16();
        (status, resp.json().await.unwrap())
    }
}

/// Serves on an ephemeral port; `catalog: None` leaves the service loading.
pub async fn start(catalog: Option<Catalog>, config: ServiceConfig) -> Server {
    let listener = TcpListener::bind(SocketAddr::from(([127, 0, 0, 1], 0))).await.unwrap();
    let addr = listener.local_addr().unwrap();
    let state = AppState::new(config.histogram_bins);
    if let Some(catalog) = catalog {
        state.install(catalog);
    }
    let served = state.clone();
    tokio::spawn(async move { vesa_service::serve(listener, served, &config).await.unwrap() });
    Server { base: format!("http://{addr}"), state, client: reqwest::Client::new() }
}
