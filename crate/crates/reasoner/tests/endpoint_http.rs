//! HTTP endpoint contract: retries on 5xx, no retry on 4xx, bounded failure
//! time on unreachable hosts.

use std::sync::atomic::{AtomicU32, Ordering};
use std::sync::Arc;
use std::time::{Duration, Instant};

use axum::extract::State;
use axum::routing::post;
use axum::{Json, Router};
use radmat_reasoner::{ChatEndpoint, EndpointConfig, ReasonerError};

#[derive(Clone)]
struct Flaky {
    hits: Arc<AtomicU32>,
    fail_first: u32,
    status_then: u16,
}

async fn flaky_completions(
    State(s): State<Flaky>,
    Json(_body): Json<serde_json::Value>,
) -> axum::response::Response {
    use axum::response::IntoResponse;
    let n = s.hits.fetch_add(1, Ordering::SeqCst);
    if n < s.fail_first {
        (
            axum::http::StatusCode::from_u16(s.status_then).unwrap(),
            "synthetic failure",
        )
            .into_response()
    } else {
        Json(serde_json::json!({
            "choices": [{"message": {"role": "assistant", "content": "echo says\nMATERIAL: glass"}}]
        }))
        .into_response()
    }
}

async fn spawn_server(fail_first: u32, status_then: u16) -> (String, Arc<AtomicU32>) {
    let hits = Arc::new(AtomicU32::new(0));
    let state = Flaky {
        hits: hits.clone(),
        fail_first,
        status_then,
    };
    let app = Router::new()
        .route("/v1/chat/completions", post(flaky_completions))
        .with_state(state);
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        axum::serve(listener, app).await.unwrap();
    });
    (format!("http://{addr}/v1"), hits)
}

fn config(base_url: String) -> EndpointConfig {
    EndpointConfig {
        base_url,
        model: "test-model".into(),
        api_key: None,
        timeout: Duration::from_secs(5),
        retries: 2,
        backoff: Duration::from_millis(20),
    }
}

#[tokio::test]
async fn recovers_after_two_server_errors() {
    let (base, hits) = spawn_server(2, 500).await;
    let ep = ChatEndpoint::from_config(config(base)).unwrap();
    let reply = ep.complete("system", "user").await.unwrap();
    assert!(reply.contains("MATERIAL: glass"));
    assert_eq!(hits.load(Ordering::SeqCst), 3, "two failures then success");
}

#[tokio::test]
async fn gives_up_after_exhausting_retries() {
    let (base, hits) = spawn_server(99, 500).await;
    let ep = ChatEndpoint::from_config(config(base)).unwrap();
    let err = ep.complete("system", "user").await.unwrap_err();
    assert!(matches!(
        err,
        ReasonerError::EndpointUnreachable { attempts: 3, .. }
    ));
    assert_eq!(hits.load(Ordering::SeqCst), 3);
}

#[tokio::test]
async fn client_errors_are_not_retried() {
    let (base, hits) = spawn_server(99, 404).await;
    let ep = ChatEndpoint::from_config(config(base)).unwrap();
    let err = ep.complete("system", "user").await.unwrap_err();
    assert!(matches!(
        err,
        ReasonerError::EndpointStatus { status: 404, .. }
    ));
    assert_eq!(hits.load(Ordering::SeqCst), 1, "4xx must not be retried");
}

#[tokio::test]
async fn unreachable_host_fails_within_the_backoff_budget() {
    // RFC 5737 TEST-NET address with a tiny connect window via the timeout
    let cfg = EndpointConfig {
        base_url: "http://127.0.0.1:9".into(), // discard port, nothing listens
        model: "m".into(),
        api_key: None,
        timeout: Duration::from_millis(500),
        retries: 1,
        backoff: Duration::from_millis(50),
    };
    let ep = ChatEndpoint::from_config(cfg).unwrap();
    let started = Instant::now();
    let err = ep.complete("s", "u").await.unwrap_err();
    let elapsed = started.elapsed();
    assert!(matches!(err, ReasonerError::EndpointUnreachable { .. }));
    // budget: 2 attempts x timeout + backoff, with slack
    assert!(
        elapsed < Duration::from_millis(2 * 500 + 50 + 500),
        "took {elapsed:?}"
    );
}

#[tokio::test]
async fn pass_through_of_fixed_text() {
    let (base, _hits) = spawn_server(0, 200).await;
    let ep = ChatEndpoint::from_config(config(base)).unwrap();
    let reply = ep.complete("system", "user").await.unwrap();
    assert_eq!(reply, "echo says\nMATERIAL: glass");
}
