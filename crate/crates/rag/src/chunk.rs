//! Fixed-size document chunking with overlap and whitespace snapping.

use crate::error::RagError;

/// One chunk of a source document. Spans are in characters.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Chunk {
    pub doc_id: String,
    pub seq: u32,
    pub text: String,
    pub char_span: (usize, usize),
}

/// Greedy fixed-size chunks with the given overlap. Each boundary is
/// snapped backward to the nearest whitespace when one exists within 10% of
/// `chunk_size`; consecutive chunks overlap by exactly `overlap` characters
/// and together cover the source text completely.
pub fn chunk_document(
    doc_id: &str,
    text: &str,
    chunk_size: usize,
    overlap: usize,
) -> Result<Vec<Chunk>, RagError> {
    if chunk_size == 0 {
        return Err(RagError::InvalidConfig("chunk_size must be positive".into()));
    }
    if overlap >= chunk_size {
        return Err(RagError::InvalidConfig(format!(
            "overlap {overlap} must be smaller than chunk_size {chunk_size}"
        )));
    }
    if text.is_empty() {
        return Err(RagError::InvalidConfig("cannot chunk empty text".into()));
    }

    // char -> byte boundary table for O(1) slicing
    let mut bounds: Vec<usize> = text.char_indices().map(|(i, _)| i).collect();
    bounds.push(text.len());
    let chars: Vec<char> = text.chars().collect();
    let n_chars = chars.len();
    let snap_window = chunk_size / 10;

    let mut chunks = Vec::new();
    let mut start = 0usize;
    let mut seq = 0u32;
    loop {
        let raw_end = (start + chunk_size).min(n_chars);
        let mut end = raw_end;
        if raw_end < n_chars && snap_window > 0 {
            // never snap past the point that would stall the stride
            let lo = raw_end.saturating_sub(snap_window).max(start + overlap);
            if let Some(p) = (lo..raw_end).rev().find(|&p| chars[p].is_whitespace()) {
                end = p + 1;
            }
        }
        chunks.push(Chunk {
            doc_id: doc_id.to_string(),
            seq,
            text: text[bounds[start]..bounds[end]].to_string(),
            char_span: (start, end),
        });
        if end >= n_chars {
            break;
        }
        start = end - overlap;
        seq += 1;
    }
    Ok(chunks)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reassemble(chunks: &[Chunk], overlap: usize) -> String {
        let mut out = String::new();
        for (i, c) in chunks.iter().enumerate() {
            if i == 0 {
                out.push_str(&c.text);
            } else {
                out.extend(c.text.chars().skip(overlap));
            }
        }
        out
    }

    #[test]
    fn stride_is_size_minus_overlap_without_whitespace() {
        let text = "x".repeat(1000);
        let chunks = chunk_document("d", &text, 512, 64).unwrap();
        let starts: Vec<usize> = chunks.iter().map(|c| c.char_span.0).collect();
        assert_eq!(starts, vec![0, 448, 896]);
        assert_eq!(chunks.len(), 3);
    }

    #[test]
    fn short_text_is_a_single_chunk() {
        let chunks = chunk_document("d", "tiny", 512, 64).unwrap();
        assert_eq!(chunks.len(), 1);
        assert_eq!(chunks[0].text, "tiny");
        assert_eq!(chunks[0].char_span, (0, 4));
    }

    #[test]
    fn coverage_identity_with_snapping() {
        let text = "The quick brown fox jumps over the lazy dog. ".repeat(40);
        let overlap = 16;
        let chunks = chunk_document("d", &text, 100, overlap).unwrap();
        assert_eq!(reassemble(&chunks, overlap), text);
        // consecutive chunks overlap by exactly the configured amount
        for w in chunks.windows(2) {
            assert_eq!(w[0].char_span.1 - w[1].char_span.0, overlap);
        }
        // snapped boundaries end on whitespace
        for c in &chunks[..chunks.len() - 1] {
            assert!(c.text.ends_with(' '), "chunk {} not snapped: {:?}", c.seq, c.text);
        }
    }

    #[test]
    fn multibyte_text_chunks_on_char_boundaries() {
        let text = "περιττό κείμενο με ελληνικούς χαρακτήρες ".repeat(10);
        let chunks = chunk_document("d", &text, 64, 8).unwrap();
        assert_eq!(reassemble(&chunks, 8), text);
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(chunk_document("d", "abc", 0, 0).is_err());
        assert!(chunk_document("d", "abc", 10, 10).is_err());
        assert!(chunk_document("d", "abc", 10, 12).is_err());
        assert!(chunk_document("d", "", 10, 2).is_err());
    }
}
