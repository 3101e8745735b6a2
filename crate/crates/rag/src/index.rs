//! The vector index: exact linear-scan top-k over embedded chunks, with a
//! single-file persistence format.
//!
//! File layout: a text header
//!
//! ```text
//! RMKB1
//! version = 1
//! embedder_id = hashed-bow-fnv64-256-v1
//! dim = 256
//! count = 12
//! <blank line>
//! ```
//!
//! followed by one binary record per entry (integers little-endian):
//! doc_id (u32 length + UTF-8), seq (u32), char span (2 x u64), chunk text
//! (u32 length + UTF-8), then `dim` f64 vector components.

use std::collections::HashSet;
use std::path::Path;

use crate::chunk::{chunk_document, Chunk};
use crate::embed::{Embedder, EmbeddingVector};
use crate::error::RagError;

pub const INDEX_MAGIC: &str = "RMKB1";
pub const INDEX_VERSION: u32 = 1;

/// One retrieval result.
#[derive(Debug, Clone, PartialEq)]
pub struct SearchHit {
    pub chunk: Chunk,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct KnowledgeIndex {
    embedder_id: String,
    dim: usize,
    entries: Vec<(Chunk, EmbeddingVector)>,
}

impl KnowledgeIndex {
    pub fn new(embedder_id: &str, dim: usize) -> Self {
        KnowledgeIndex {
            embedder_id: embedder_id.to_string(),
            dim,
            entries: Vec::new(),
        }
    }

    pub fn embedder_id(&self) -> &str {
        &self.embedder_id
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn entries(&self) -> &[(Chunk, EmbeddingVector)] {
        &self.entries
    }

    pub fn insert(&mut self, chunk: Chunk, vector: EmbeddingVector) -> Result<(), RagError> {
        if vector.dim() != self.dim {
            return Err(RagError::Integrity(format!(
                "vector dim {} != index dim {}",
                vector.dim(),
                self.dim
            )));
        }
        if !vector.values.iter().all(|v| v.is_finite()) || vector.norm() == 0.0 {
            return Err(RagError::Integrity(
                "vectors must be finite and non-zero".into(),
            ));
        }
        if self
            .entries
            .iter()
            .any(|(c, _)| c.doc_id == chunk.doc_id && c.seq == chunk.seq)
        {
            return Err(RagError::Integrity(format!(
                "duplicate entry ({}, {})",
                chunk.doc_id, chunk.seq
            )));
        }
        self.entries.push((chunk, vector));
        Ok(())
    }

    /// Chunk and embed a document set into a fresh index. Documents are
    /// processed in the given order; chunks that cannot be embedded (for
    /// example pure punctuation) are skipped.
    pub fn build(
        documents: &[(String, String)],
        embedder: &dyn Embedder,
        chunk_size: usize,
        overlap: usize,
    ) -> Result<Self, RagError> {
        let mut index = KnowledgeIndex::new(embedder.id(), embedder.dim());
        for (doc_id, text) in documents {
            for chunk in chunk_document(doc_id, text, chunk_size, overlap)? {
                match embedder.embed(&chunk.text) {
                    Ok(vector) => index.insert(chunk, vector)?,
                    Err(RagError::Unembeddable(_)) => continue,
                    Err(e) => return Err(e),
                }
            }
        }
        Ok(index)
    }

    /// Exact top-k by cosine similarity. Ties break by (doc_id, seq)
    /// ascending so results are independent of insertion order; k is capped
    /// at the index size.
    pub fn search_topk(
        &self,
        embedder: &dyn Embedder,
        query: &str,
        k: usize,
    ) -> Result<Vec<SearchHit>, RagError> {
        if self.entries.is_empty() {
            return Err(RagError::EmptyIndex);
        }
        if k == 0 {
            return Err(RagError::InvalidConfig("k must be >= 1".into()));
        }
        if embedder.id() != self.embedder_id {
            return Err(RagError::EmbedderMismatch {
                index: self.embedder_id.clone(),
                query: embedder.id().to_string(),
            });
        }
        let q = embedder.embed(query)?;
        let mut scored: Vec<SearchHit> = self
            .entries
            .iter()
            .map(|(chunk, v)| SearchHit {
                chunk: chunk.clone(),
                score: q.cosine(v),
            })
            .collect();
        scored.sort_by(|a, b| {
            b.score
                .partial_cmp(&a.score)
                .unwrap()
                .then_with(|| a.chunk.doc_id.cmp(&b.chunk.doc_id))
                .then_with(|| a.chunk.seq.cmp(&b.chunk.seq))
        });
        scored.truncate(k.min(self.entries.len()));
        Ok(scored)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut out = Vec::new();
        out.extend_from_slice(INDEX_MAGIC.as_bytes());
        out.push(b'\n');
        out.extend_from_slice(format!("version = {INDEX_VERSION}\n").as_bytes());
        out.extend_from_slice(format!("embedder_id = {}\n", self.embedder_id).as_bytes());
        out.extend_from_slice(format!("dim = {}\n", self.dim).as_bytes());
        out.extend_from_slice(format!("count = {}\n\n", self.entries.len()).as_bytes());
        for (chunk, vector) in &self.entries {
            let doc = chunk.doc_id.as_bytes();
            out.extend_from_slice(&(doc.len() as u32).to_le_bytes());
            out.extend_from_slice(doc);
            out.extend_from_slice(&chunk.seq.to_le_bytes());
            out.extend_from_slice(&(chunk.char_span.0 as u64).to_le_bytes());
            out.extend_from_slice(&(chunk.char_span.1 as u64).to_le_bytes());
            let text = chunk.text.as_bytes();
            out.extend_from_slice(&(text.len() as u32).to_le_bytes());
            out.extend_from_slice(text);
            for v in &vector.values {
                out.extend_from_slice(&v.to_le_bytes());
            }
        }
        out
    }

    pub fn from_bytes(bytes: &[u8]) -> Result<Self, RagError> {
        // header: 5 text lines then a blank line
        let mut at = 0usize;
        let mut line = || -> Result<String, RagError> {
            let rest = &bytes[at..];
            let end = rest
                .iter()
                .position(|&b| b == b'\n')
                .ok_or_else(|| RagError::Format("truncated header".into()))?;
            let s = std::str::from_utf8(&rest[..end])
                .map_err(|_| RagError::Format("header is not UTF-8".into()))?
                .to_string();
            at += end + 1;
            Ok(s)
        };
        if line()? != INDEX_MAGIC {
            return Err(RagError::Format("bad magic (not an RMKB1 index)".into()));
        }
        let mut header = std::collections::HashMap::new();
        loop {
            let l = line()?;
            if l.is_empty() {
                break;
            }
            let (k, v) = l
                .split_once('=')
                .ok_or_else(|| RagError::Format(format!("bad header line `{l}`")))?;
            header.insert(k.trim().to_string(), v.trim().to_string());
        }
        let field = |k: &str| -> Result<String, RagError> {
            header
                .get(k)
                .cloned()
                .ok_or_else(|| RagError::Format(format!("missing header field `{k}`")))
        };
        let version: u32 = field("version")?
            .parse()
            .map_err(|_| RagError::Format("bad version".into()))?;
        if version != INDEX_VERSION {
            return Err(RagError::Format(format!("unsupported version {version}")));
        }
        let embedder_id = field("embedder_id")?;
        let dim: usize = field("dim")?
            .parse()
            .map_err(|_| RagError::Format("bad dim".into()))?;
        let count: usize = field("count")?
            .parse()
            .map_err(|_| RagError::Format("bad count".into()))?;

        let mut take = |n: usize| -> Result<&[u8], RagError> {
            if at + n > bytes.len() {
                return Err(RagError::Format("truncated entry".into()));
            }
            let s = &bytes[at..at + n];
            at += n;
            Ok(s)
        };
        let mut index = KnowledgeIndex::new(&embedder_id, dim);
        let mut seen = HashSet::new();
        for _ in 0..count {
            let doc_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
            let doc_id = String::from_utf8(take(doc_len)?.to_vec())
                .map_err(|_| RagError::Format("doc_id is not UTF-8".into()))?;
            let seq = u32::from_le_bytes(take(4)?.try_into().unwrap());
            let s0 = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
            let s1 = u64::from_le_bytes(take(8)?.try_into().unwrap()) as usize;
            let text_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
            let text = String::from_utf8(take(text_len)?.to_vec())
                .map_err(|_| RagError::Format("chunk text is not UTF-8".into()))?;
            let mut values = Vec::with_capacity(dim);
            for _ in 0..dim {
                values.push(f64::from_le_bytes(take(8)?.try_into().unwrap()));
            }
            if !seen.insert((doc_id.clone(), seq)) {
                return Err(RagError::Integrity(format!(
                    "duplicate entry ({doc_id}, {seq})"
                )));
            }
            index.entries.push((
                Chunk {
                    doc_id,
                    seq,
                    text,
                    char_span: (s0, s1),
                },
                EmbeddingVector { values },
            ));
        }
        if at != bytes.len() {
            return Err(RagError::Format("trailing bytes after entries".into()));
        }
        Ok(index)
    }

    pub fn save(&self, path: &Path) -> Result<(), RagError> {
        Ok(std::fs::write(path, self.to_bytes())?)
    }

    pub fn load(path: &Path) -> Result<Self, RagError> {
        Self::from_bytes(&std::fs::read(path)?)
    }
}

/// Read the plain-text (.txt) and Markdown (.md) files of a directory as
/// (doc_id, text) pairs, sorted by file name for determinism.
pub fn load_documents(dir: &Path) -> Result<Vec<(String, String)>, RagError> {
    let mut docs = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let entry = entry?;
        let path = entry.path();
        if !path.is_file() {
            continue;
        }
        let ext = path.extension().and_then(|e| e.to_str()).unwrap_or("");
        if !matches!(ext, "txt" | "md") {
            continue;
        }
        let doc_id = path
            .file_name()
            .and_then(|n| n.to_str())
            .unwrap_or("document")
            .to_string();
        let text = std::fs::read_to_string(&path)?;
        if !text.trim().is_empty() {
            docs.push((doc_id, text));
        }
    }
    docs.sort_by(|a, b| a.0.cmp(&b.0));
    Ok(docs)
}
