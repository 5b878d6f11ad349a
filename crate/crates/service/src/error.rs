use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use serde::Serialize;
use serde_json::json;
use vesa_core::query::QueryError;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: &'static str,
    pub message: String,
    /// The offending request value, when there is one.
    pub value: Option<String>,
}

#[derive(Serialize)]
struct ErrorBody<'a> {
    code: &'a str,
    message: &'a str,
    #[serde(skip_serializing_if = "Option::is_none")]
    value: Option<&'a str>,
}

impl ApiError {
    pub fn new(status: StatusCode, code: &'static str, message: impl Into<String>) -> Self {
        Self { status, code, message: message.into(), value: None }
    }

    pub fn with_value(mut self, value: impl Into<String>) -> Self {
        self.value = Some(value.into());
        self
    }

    pub fn bad_request(message: impl Into<String>) -> Self {
        Self::new(StatusCode::BAD_REQUEST, "bad_request", message)
    }

    pub fn not_ready() -> Self {
        Self::new(StatusCode::SERVICE_UNAVAILABLE, "not_ready", "graph is still loading")
    }
}

impl From<QueryError> for ApiError {
    fn from(e: QueryError) -> Self {
        let message = e.to_string();
        match e {
            QueryError::UnknownKeyword(v) => Self::new(StatusCode::NOT_FOUND, "unknown_keyword", message).with_value(v),
            QueryError::UnknownAuthor(v) => Self::new(StatusCode::NOT_FOUND, "unknown_author", message).with_value(v),
            QueryError::UnknownDataset(v) => Self::new(StatusCode::NOT_FOUND, "unknown_dataset", message).with_value(v),
            QueryError::InvalidSelection(_) => Self::new(StatusCode::BAD_REQUEST, "invalid_selection", message),
            QueryError::TooManyBins { .. } => Self::new(StatusCode::BAD_REQUEST, "too_many_bins", message),
            QueryError::Internal(_) => Self::new(StatusCode::INTERNAL_SERVER_ERROR, "internal", message),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let body = ErrorBody { code: self.code, message: &self.message, value: self.value.as_deref() };
        (self.status, Json(json!({ "error": body }))).into_response()
    }
}
