//! HTTP+JSON front end for [`SessionStore`].

use std::net::SocketAddr;
use std::sync::Arc;

use axum::extract::{Path, State};
use axum::http::{header, Method, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::json;
use tokio::net::TcpListener;
use tower_http::cors::{Any, CorsLayer};

use crate::json::parse_error_json;
use crate::session::{SessionError, SessionStore};

#[derive(Debug, Deserialize)]
struct CreateRequest {
    source: String,
    process: String,
}

#[derive(Debug, Deserialize)]
struct StepRequest {
    event: String,
}

pub fn router(store: Arc<SessionStore>) -> Router {
    let cors = CorsLayer::new()
        .allow_origin(Any)
        .allow_methods([Method::GET, Method::POST, Method::DELETE])
        .allow_headers([header::CONTENT_TYPE]);
    Router::new()
        .route("/health", get(|| async { "ok" }))
        .route("/sessions", post(create))
        .route("/sessions/{id}", get(fetch).delete(remove))
        .route("/sessions/{id}/step", post(step))
        .route("/sessions/{id}/reset", post(reset))
        .layer(cors)
        .with_state(store)
}

/// Serves on an already bound listener until the future is dropped or
/// ctrl-c arrives.
pub async fn serve(listener: TcpListener, store: Arc<SessionStore>) -> std::io::Result<()> {
    axum::serve(listener, router(store))
        .with_graceful_shutdown(async {
            let _ = tokio::signal::ctrl_c().await;
        })
        .await
}

pub async fn bind(addr: SocketAddr) -> std::io::Result<TcpListener> {
    TcpListener::bind(addr).await
}

async fn create(State(store): State<Arc<SessionStore>>, Json(req): Json<CreateRequest>) -> Response {
    blocking(move || store.create(&req.source, &req.process))
        .await
        .map(|view| (StatusCode::CREATED, Json(view)).into_response())
        .unwrap_or_else(error_response)
}

async fn fetch(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Response {
    store.get(&id).map(|view| Json(view).into_response()).unwrap_or_else(error_response)
}

async fn step(
    State(store): State<Arc<SessionStore>>,
    Path(id): Path<String>,
    Json(req): Json<StepRequest>,
) -> Response {
    blocking(move || store.step(&id, &req.event))
        .await
        .map(|view| Json(view).into_response())
        .unwrap_or_else(error_response)
}

async fn reset(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Response {
    blocking(move || store.reset(&id)).await.map(|view| Json(view).into_response()).unwrap_or_else(error_response)
}

async fn remove(State(store): State<Arc<SessionStore>>, Path(id): Path<String>) -> Response {
    match store.delete(&id) {
        Ok(()) => StatusCode::NO_CONTENT.into_response(),
        Err(e) => error_response(e),
    }
}

// Exploring a term can take a while; keep it off the async workers.
async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, SessionError> + Send + 'static,
) -> Result<T, SessionError> {
    tokio::task::spawn_blocking(f).await.expect("session work panicked")
}

fn error_response(error: SessionError) -> Response {
    let (status, body) = match &error {
        SessionError::Parse(e) => (StatusCode::BAD_REQUEST, parse_error_json(e)),
        SessionError::UnknownProcess(_) | SessionError::UnknownSession(_) => {
            (StatusCode::NOT_FOUND, json!({ "error": error.to_string() }))
        }
        SessionError::NotOffered { offered, .. } => {
            (StatusCode::CONFLICT, json!({ "error": error.to_string(), "offered": offered }))
        }
        SessionError::Semantic(_) => (StatusCode::UNPROCESSABLE_ENTITY, json!({ "error": error.to_string() })),
    };
    (status, Json(body)).into_response()
}
