//! Reasoner error type.

use radmat_rag::RagError;

#[derive(Debug, thiserror::Error)]
pub enum ReasonerError {
    #[error("retrieval requested but no knowledge index was provided")]
    MissingIndex,

    #[error("LLM inference requested but no endpoint was configured")]
    MissingEndpoint,

    #[error("invalid endpoint: {0}")]
    InvalidEndpoint(String),

    #[error("endpoint unreachable after {attempts} attempt(s): {last}")]
    EndpointUnreachable { attempts: u32, last: String },

    #[error("endpoint returned status {status}: {excerpt}")]
    EndpointStatus { status: u16, excerpt: String },

    #[error("malformed endpoint response: {0}")]
    MalformedResponse(String),

    #[error(transparent)]
    Rag(#[from] RagError),
}
