//! HTTP error mapping.

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use radmat_api::ErrorBody;
use radmat_core::CoreError;
use radmat_rag::RagError;
use radmat_reasoner::ReasonerError;

#[derive(Debug)]
pub struct ApiError {
    pub status: StatusCode,
    pub code: String,
    pub message: String,
}

impl ApiError {
    pub fn bad_request(code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::BAD_REQUEST,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn unprocessable(code: &str, message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::UNPROCESSABLE_ENTITY,
            code: code.into(),
            message: message.into(),
        }
    }

    pub fn internal(message: impl Into<String>) -> Self {
        ApiError {
            status: StatusCode::INTERNAL_SERVER_ERROR,
            code: "internal".into(),
            message: message.into(),
        }
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (
            self.status,
            Json(ErrorBody {
                code: self.code,
                error: self.message,
            }),
        )
            .into_response()
    }
}

impl From<CoreError> for ApiError {
    fn from(e: CoreError) -> Self {
        let message = e.to_string();
        // unwrap stage labels for status selection, keep them in the message
        let mut inner = &e;
        while let CoreError::Stage { source, .. } = inner {
            inner = source;
        }
        let (status, code) = match inner {
            CoreError::InvalidConfig(_) => (StatusCode::BAD_REQUEST, "invalid-config"),
            CoreError::Domain(_) => (StatusCode::BAD_REQUEST, "domain"),
            CoreError::TargetRejected(_) => (StatusCode::BAD_REQUEST, "target-rejected"),
            CoreError::Unsupported(_) => (StatusCode::BAD_REQUEST, "unsupported"),
            CoreError::Parse(_) => (StatusCode::BAD_REQUEST, "parse"),
            CoreError::Capture(_) => (StatusCode::BAD_REQUEST, "malformed-capture"),
            CoreError::MissingCalibration(_) => (StatusCode::BAD_REQUEST, "missing-calibration"),
            CoreError::CalibrationAmbiguity(_) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "calibration-ambiguity")
            }
            CoreError::AmbiguousDoa(_) => (StatusCode::UNPROCESSABLE_ENTITY, "ambiguous-doa"),
            CoreError::DegenerateGeometry(_) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "degenerate-geometry")
            }
            CoreError::SingularInput(_) => (StatusCode::UNPROCESSABLE_ENTITY, "singular-input"),
            CoreError::InversionFailure(_) => {
                (StatusCode::UNPROCESSABLE_ENTITY, "inversion-failure")
            }
            CoreError::NoTarget => (StatusCode::UNPROCESSABLE_ENTITY, "no-target"),
            CoreError::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
            CoreError::Stage { .. } => (StatusCode::INTERNAL_SERVER_ERROR, "internal"),
        };
        ApiError {
            status,
            code: code.into(),
            message,
        }
    }
}

impl From<RagError> for ApiError {
    fn from(e: RagError) -> Self {
        let message = e.to_string();
        let (status, code) = match &e {
            RagError::InvalidConfig(_) => (StatusCode::BAD_REQUEST, "invalid-config"),
            RagError::Unembeddable(_) => (StatusCode::BAD_REQUEST, "unembeddable"),
            RagError::EmptyIndex => (StatusCode::BAD_REQUEST, "empty-index"),
            RagError::EmbedderMismatch { .. } => (StatusCode::BAD_REQUEST, "embedder-mismatch"),
            RagError::Integrity(_) => (StatusCode::BAD_REQUEST, "index-integrity"),
            RagError::Format(_) => (StatusCode::BAD_REQUEST, "malformed-index"),
            RagError::Io(_) => (StatusCode::INTERNAL_SERVER_ERROR, "io"),
        };
        ApiError {
            status,
            code: code.into(),
            message,
        }
    }
}

impl From<ReasonerError> for ApiError {
    fn from(e: ReasonerError) -> Self {
        match e {
            ReasonerError::Rag(inner) => inner.into(),
            ReasonerError::MissingIndex => {
                ApiError::bad_request("missing-index", e.to_string())
            }
            ReasonerError::MissingEndpoint => {
                ApiError::bad_request("missing-endpoint", e.to_string())
            }
            ReasonerError::InvalidEndpoint(_) => {
                ApiError::bad_request("invalid-endpoint", e.to_string())
            }
            ReasonerError::EndpointUnreachable { .. } => ApiError {
                status: StatusCode::BAD_GATEWAY,
                code: "endpoint-unreachable".into(),
                message: e.to_string(),
            },
            ReasonerError::EndpointStatus { .. } | ReasonerError::MalformedResponse(_) => {
                ApiError {
                    status: StatusCode::BAD_GATEWAY,
                    code: "endpoint-error".into(),
                    message: e.to_string(),
                }
            }
        }
    }
}
