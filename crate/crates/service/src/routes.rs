use std::sync::Arc;

use axum::extract::rejection::{JsonRejection, QueryRejection};
use axum::extract::{Query, State};
use axum::http::{header, HeaderValue, Method};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tower_http::cors::{AllowOrigin, Any, CorsLayer};
use vesa_core::query::{BinUnit, FilterResult, Page, SelectionState, VisualizationPayloads};
use vesa_core::{NodeId, TimeRange, Timestamp};

use crate::error::ApiError;
use crate::state::{AppState, Loaded};

pub fn router(state: AppState, cors_origins: &[String]) -> Router {
    Router::new()
        .route("/main/all", get(main_all))
        .route("/keyword", get(keyword))
        .route("/time", get(time))
        .route("/abstract", get(abstract_text))
        .route("/map", get(map))
        .route("/filter", post(filter))
        .layer(cors(cors_origins))
        .with_state(state)
}

fn cors(origins: &[String]) -> CorsLayer {
    let layer = CorsLayer::new()
        .allow_methods([Method::GET, Method::POST])
        .allow_headers([header::CONTENT_TYPE]);
    if origins.is_empty() || origins.iter().any(|o| o == "*") {
        return layer.allow_origin(Any);
    }
    let origins: Vec<HeaderValue> = origins.iter().filter_map(|o| HeaderValue::from_str(o).ok()).collect();
    layer.allow_origin(AllowOrigin::list(origins))
}

fn loaded(state: &AppState) -> Result<Arc<Loaded>, ApiError> {
    state.current().ok_or_else(ApiError::not_ready)
}

fn query_params<T>(params: Result<Query<T>, QueryRejection>) -> Result<T, ApiError> {
    params.map(|Query(p)| p).map_err(|e| ApiError::bad_request(e.body_text()))
}

fn cached_json(body: axum::body::Bytes) -> Response {
    ([(header::CONTENT_TYPE, "application/json")], body).into_response()
}

async fn main_all(State(state): State<AppState>) -> Result<Response, ApiError> {
    Ok(cached_json(loaded(&state)?.main_all.clone()))
}

async fn map(State(state): State<AppState>) -> Result<Response, ApiError> {
    Ok(cached_json(loaded(&state)?.map.clone()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct KeywordParams {
    term: Option<String>,
}

async fn keyword(
    State(state): State<AppState>,
    params: Result<Query<KeywordParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let loaded = loaded(&state)?;
    let params = query_params(params)?;
    let catalog = &loaded.catalog;
    match params.term {
        None => Ok(cached_json(loaded.cloud.clone())),
        Some(term) if term.trim().is_empty() => Err(ApiError::bad_request("term must not be empty").with_value(term)),
        Some(term) => Ok(Json(catalog.keyword_detail(&term)?).into_response()),
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct TimeParams {
    start: String,
    end: String,
}

fn timestamp_param(name: &str, raw: &str) -> Result<Timestamp, ApiError> {
    Timestamp::parse(raw)
        .map_err(|e| ApiError::bad_request(format!("{name}: {}", e.message)).with_value(raw))
}

async fn time(
    State(state): State<AppState>,
    params: Result<Query<TimeParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let loaded = loaded(&state)?;
    let params = query_params(params)?;
    let range = TimeRange { start: timestamp_param("start", &params.start)?, end: timestamp_param("end", &params.end)? };
    if range.start > range.end {
        return Err(ApiError::bad_request("start is after end").with_value(format!("{}..{}", params.start, params.end)));
    }
    let positions = loaded.catalog.positions_in_range(&range)?;
    Ok(cached_json(loaded.record_list(positions)))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct AbstractParams {
    id: String,
}

async fn abstract_text(
    State(state): State<AppState>,
    params: Result<Query<AbstractParams>, QueryRejection>,
) -> Result<Response, ApiError> {
    let loaded = loaded(&state)?;
    let params = query_params(params)?;
    let id = NodeId::parse(&params.id).map_err(|_| vesa_core::QueryError::UnknownDataset(params.id.clone()))?;
    Ok(Json(loaded.catalog.abstract_record(&id)?).into_response())
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct FilterParams {
    bin: Option<BinUnit>,
    #[serde(default)]
    offset: usize,
    limit: Option<usize>,
}

#[derive(Serialize)]
struct FilterResponse {
    filter: FilterResult,
    payloads: VisualizationPayloads,
}

async fn filter(
    State(state): State<AppState>,
    params: Result<Query<FilterParams>, QueryRejection>,
    body: Result<Json<SelectionState>, JsonRejection>,
) -> Result<Response, ApiError> {
    let loaded = loaded(&state)?;
    let params = query_params(params)?;
    let Json(selection) = body.map_err(|e| ApiError::bad_request(e.body_text()))?;
    let catalog = &loaded.catalog;
    let result = catalog.evaluate(&selection)?;
    let bin = params.bin.unwrap_or_else(|| BinUnit::auto(catalog.temporal_axis(), state.histogram_bins));
    let page = Page { offset: params.offset, limit: params.limit };
    let payloads = catalog.payloads(&selection, &result, bin, page)?;
    Ok(Json(FilterResponse { filter: result, payloads }).into_response())
}
