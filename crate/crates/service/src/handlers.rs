//! Route handlers.

use axum::body::Bytes;
use axum::extract::Query;
use axum::http::header;
use axum::response::{IntoResponse, Response};
use axum::Json;
use radmat_api as api;
use radmat_core::capture::{read_capture, write_capture};
use radmat_core::em::Calibration;
use radmat_core::pipeline::calibrate_from_cube;
use radmat_core::sim::{synthesize_cube, NoiseSpec};
use radmat_rag::{HashedBagOfWords, KnowledgeIndex};
use radmat_reasoner::{stub_completion, RuleTable};
use serde_json::{json, Value};

use crate::error::ApiError;
use crate::report::run_report;

pub async fn health() -> Json<api::HealthResponse> {
    Json(api::HealthResponse {
        status: "ok".into(),
        version: env!("CARGO_PKG_VERSION").into(),
    })
}

async fn blocking<T, F>(f: F) -> Result<T, ApiError>
where
    T: Send + 'static,
    F: FnOnce() -> Result<T, ApiError> + Send + 'static,
{
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| ApiError::internal(format!("worker panicked: {e}")))?
}

pub async fn simulate(Json(req): Json<api::SimulateRequest>) -> Result<Response, ApiError> {
    let bytes = blocking(move || {
        req.config.validate()?;
        let noise = NoiseSpec {
            noise_power: req.noise_power.unwrap_or_else(|| req.config.thermal_noise_power()),
            rng_seed: req.seed,
        };
        let cube = synthesize_cube(&req.config, &req.targets, &noise)?;
        Ok(write_capture(&cube))
    })
    .await?;
    Ok((
        [(header::CONTENT_TYPE, "application/octet-stream")],
        bytes,
    )
        .into_response())
}

pub async fn calibrate(
    Query(q): Query<api::CalibrateQuery>,
    body: Bytes,
) -> Result<Json<Calibration>, ApiError> {
    let cal = blocking(move || {
        let cube = read_capture(&body)?;
        let mut cal = calibrate_from_cube(&cube, q.sphere_diameter_m)?;
        if let Some(rho_ref) = q.rho_ref {
            if !(rho_ref > 0.0) || !rho_ref.is_finite() {
                return Err(ApiError::bad_request(
                    "domain",
                    format!("rho_ref must be positive, got {rho_ref}"),
                ));
            }
            cal.rho_ref = rho_ref;
        }
        Ok(cal)
    })
    .await?;
    Ok(Json(cal))
}

pub async fn process(
    Query(q): Query<api::ProcessQuery>,
    body: Bytes,
) -> Result<Json<api::ProcessResponse>, ApiError> {
    let resp = blocking(move || {
        let cube = read_capture(&body)?;
        let cal = Calibration {
            k: q.k,
            rho_ref: q.rho_ref,
            source: "client-supplied".into(),
        };
        cal.validate()?;
        let processed = radmat_core::pipeline::process_cube(
            &cube,
            &radmat_core::dsp::DetectorParams::default(),
        )?;
        let (rd_map_b64, ra_map_b64) = if q.include_maps {
            let rd = api::b64::encode(&radmat_core::dsp::write_matrix(&processed.rd.power));
            let ra = processed
                .ra
                .as_ref()
                .map(|ra| api::b64::encode(&radmat_core::dsp::write_matrix(&ra.power)));
            (Some(rd), ra)
        } else {
            (None, None)
        };
        let mut records = radmat_core::pipeline::em_from_detections(
            &processed.detections,
            &cal,
            cube.config(),
        )?;
        if !q.all_targets {
            records.truncate(1);
        }
        Ok(api::ProcessResponse {
            records,
            rd_map_b64,
            ra_map_b64,
        })
    })
    .await?;
    Ok(Json(resp))
}

pub async fn index(Json(req): Json<api::IndexRequest>) -> Result<Json<api::IndexResponse>, ApiError> {
    let resp = blocking(move || {
        if req.documents.is_empty() {
            return Err(ApiError::bad_request("empty-input", "no documents supplied"));
        }
        let docs: Vec<(String, String)> = req
            .documents
            .into_iter()
            .map(|d| (d.doc_id, d.text))
            .collect();
        let index = KnowledgeIndex::build(&docs, &HashedBagOfWords, req.chunk_size, req.overlap)?;
        let chunk_counts = docs
            .iter()
            .map(|(doc_id, _)| api::DocChunkCount {
                doc_id: doc_id.clone(),
                chunks: index
                    .entries()
                    .iter()
                    .filter(|(c, _)| &c.doc_id == doc_id)
                    .count(),
            })
            .collect();
        Ok(api::IndexResponse {
            index_b64: api::b64::encode(&index.to_bytes()),
            total_chunks: index.len(),
            chunk_counts,
        })
    })
    .await?;
    Ok(Json(resp))
}

pub async fn identify(
    Json(req): Json<api::IdentifyRequest>,
) -> Result<Json<api::MaterialVerdict>, ApiError> {
    let index = match &req.index_b64 {
        Some(b64) => {
            let bytes = api::b64::decode(b64)
                .map_err(|e| ApiError::bad_request("malformed-index", e))?;
            Some(KnowledgeIndex::from_bytes(&bytes).map_err(ApiError::from)?)
        }
        None => None,
    };
    let endpoint = match req.endpoint.clone() {
        Some(spec) => Some(
            radmat_reasoner::ChatEndpoint::from_config(spec.into()).map_err(ApiError::from)?,
        ),
        None => None,
    };
    let opts = radmat_reasoner::IdentifyOptions {
        with_rag: req.with_rag,
        use_llm: req.use_llm,
        top_k: req.top_k,
        rule_fallback: false,
    };
    let verdict = radmat_reasoner::identify(
        &req.params,
        index.as_ref(),
        endpoint.as_ref(),
        &RuleTable::default(),
        &opts,
    )
    .await
    .map_err(ApiError::from)?;
    Ok(Json(verdict))
}

pub async fn report(
    Json(req): Json<api::ReportRequest>,
) -> Result<Json<api::ReportResponse>, ApiError> {
    Ok(Json(run_report(req).await?))
}

/// OpenAI-compatible chat completions backed by the deterministic rule
/// table; lets the full HTTP inference path run with no model installed.
pub async fn stub_chat_completions(Json(body): Json<Value>) -> Result<Json<Value>, ApiError> {
    let user_text = body
        .get("messages")
        .and_then(Value::as_array)
        .and_then(|msgs| {
            msgs.iter()
                .rev()
                .find(|m| m.get("role").and_then(Value::as_str) == Some("user"))
        })
        .and_then(|m| m.get("content").and_then(Value::as_str))
        .ok_or_else(|| ApiError::bad_request("bad-request", "no user message in request"))?;
    let content = stub_completion(user_text, &RuleTable::default());
    let model = body
        .get("model")
        .and_then(Value::as_str)
        .unwrap_or("rule-stub");
    Ok(Json(json!({
        "id": "stub-completion",
        "object": "chat.completion",
        "model": model,
        "choices": [{
            "index": 0,
            "message": {"role": "assistant", "content": content},
            "finish_reason": "stop"
        }]
    })))
}
