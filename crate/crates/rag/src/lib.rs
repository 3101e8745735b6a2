//! Knowledge-base retrieval: chunking, deterministic embedding, and exact
//! top-k cosine search over a small on-disk index.
//!
//! The built-in embedder is a hashed bag of words so the whole retrieval
//! path runs offline and reproducibly; remote embedders can be plugged in
//! behind the same trait, and the index records which embedder produced it
//! so mismatched queries are rejected.

mod chunk;
mod embed;
mod error;
mod index;

pub use chunk::{chunk_document, Chunk};
pub use embed::{Embedder, EmbeddingVector, HashedBagOfWords, EMBED_DIM};
pub use error::RagError;
pub use index::{load_documents, KnowledgeIndex, SearchHit};
