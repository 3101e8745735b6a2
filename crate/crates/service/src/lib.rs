//! HTTP/JSON service exposing the radar material identification chain.
//!
//! The service is stateless: every request carries its inputs (configs,
//! capture bytes, index payloads) and returns its full result, so any number
//! of clients can share one instance. Raw captures travel as the binary
//! capture format; knowledge indexes ride base64 inside JSON.
//!
//! Routes (all under /v1):
//!   GET  /health
//!   POST /simulate              JSON scene  -> capture bytes
//!   POST /calibrate?...        capture     -> calibration JSON
//!   POST /process?...          capture     -> parameter records JSON
//!   POST /index                 documents   -> index + chunk counts
//!   POST /identify              parameters  -> material verdict
//!   POST /report                suite       -> per-object rows + accuracy
//!   POST /stub-llm/chat/completions   OpenAI-shaped deterministic stub

mod error;
mod handlers;
mod report;

pub use error::ApiError;

use axum::extract::DefaultBodyLimit;
use axum::routing::{get, post};
use axum::Router;
use radmat_api::paths;

/// Largest accepted request body. Captures for the default configuration
/// are ~5 MB; leave generous headroom for bigger arrays.
pub const MAX_BODY_BYTES: usize = 256 * 1024 * 1024;

pub fn app() -> Router {
    Router::new()
        .route(paths::HEALTH, get(handlers::health))
        .route(paths::SIMULATE, post(handlers::simulate))
        .route(paths::CALIBRATE, post(handlers::calibrate))
        .route(paths::PROCESS, post(handlers::process))
        .route(paths::INDEX, post(handlers::index))
        .route(paths::IDENTIFY, post(handlers::identify))
        .route(paths::REPORT, post(handlers::report))
        .route(
            "/v1/stub-llm/chat/completions",
            post(handlers::stub_chat_completions),
        )
        .layer(DefaultBodyLimit::max(MAX_BODY_BYTES))
}

/// Serve until the listener closes.
pub async fn serve(listener: tokio::net::TcpListener) -> std::io::Result<()> {
    axum::serve(listener, app()).await
}
