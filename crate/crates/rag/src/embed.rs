//! Text embedding.

use crate::error::RagError;

/// Dimension of the built-in embedder.
pub const EMBED_DIM: usize = 256;

/// A unit-norm embedding.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddingVector {
    pub values: Vec<f64>,
}

impl EmbeddingVector {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn norm(&self) -> f64 {
        self.values.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    /// Cosine similarity; for unit-norm vectors this is the dot product.
    pub fn cosine(&self, other: &EmbeddingVector) -> f64 {
        self.values
            .iter()
            .zip(other.values.iter())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// Pluggable embedding backend. Implementations must be deterministic for
/// the index round-trip guarantees to hold.
pub trait Embedder {
    /// Stable identifier stored in the index and checked at query time.
    fn id(&self) -> &str;
    fn dim(&self) -> usize;
    fn embed(&self, text: &str) -> Result<EmbeddingVector, RagError>;
}

/// Deterministic offline embedder: lowercase alphanumeric tokens, each
/// hashed (FNV-1a 64) into one of 256 bins with a hash-derived sign, then
/// L2-normalized.
#[derive(Debug, Clone, Copy, Default)]
pub struct HashedBagOfWords;

impl HashedBagOfWords {
    pub const ID: &'static str = "hashed-bow-fnv64-256-v1";
}

fn fnv1a64(bytes: &[u8]) -> u64 {
    let mut h: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        h ^= b as u64;
        h = h.wrapping_mul(0x100000001b3);
    }
    h
}

impl Embedder for HashedBagOfWords {
    fn id(&self) -> &str {
        Self::ID
    }

    fn dim(&self) -> usize {
        EMBED_DIM
    }

    fn embed(&self, text: &str) -> Result<EmbeddingVector, RagError> {
        let mut values = vec![0.0f64; EMBED_DIM];
        let mut tokens = 0usize;
        for token in text.split(|c: char| !c.is_alphanumeric()) {
            if token.is_empty() {
                continue;
            }
            tokens += 1;
            let h = fnv1a64(token.to_lowercase().as_bytes());
            let idx = (h % EMBED_DIM as u64) as usize;
            let sign = if (h >> 8) & 1 == 0 { 1.0 } else { -1.0 };
            values[idx] += sign;
        }
        if tokens == 0 {
            return Err(RagError::Unembeddable(
                "no alphanumeric tokens in the input".into(),
            ));
        }
        let norm = values.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm == 0.0 {
            return Err(RagError::Unembeddable(
                "token signs cancelled to the zero vector".into(),
            ));
        }
        for v in values.iter_mut() {
            *v /= norm;
        }
        Ok(EmbeddingVector { values })
    }
}
