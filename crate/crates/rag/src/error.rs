//! Retrieval error type.

#[derive(Debug, thiserror::Error)]
pub enum RagError {
    #[error("invalid chunking config: {0}")]
    InvalidConfig(String),

    #[error("cannot embed: {0}")]
    Unembeddable(String),

    #[error("empty index")]
    EmptyIndex,

    #[error("embedder mismatch: index built with `{index}`, query uses `{query}`")]
    EmbedderMismatch { index: String, query: String },

    #[error("index integrity: {0}")]
    Integrity(String),

    #[error("malformed index: {0}")]
    Format(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}
