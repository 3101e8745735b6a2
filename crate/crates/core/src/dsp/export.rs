//! Binary matrix export for plotting RD/RA maps.
//!
//! Layout: magic "RMM1", rows and cols as u32 little-endian, then row-major
//! f64 little-endian values.

use std::path::Path;

use ndarray::Array2;

use crate::error::CoreError;

pub const MATRIX_MAGIC: &[u8; 4] = b"RMM1";

pub fn write_matrix(m: &Array2<f64>) -> Vec<u8> {
    let (rows, cols) = m.dim();
    let mut out = Vec::with_capacity(12 + rows * cols * 8);
    out.extend_from_slice(MATRIX_MAGIC);
    out.extend_from_slice(&(rows as u32).to_le_bytes());
    out.extend_from_slice(&(cols as u32).to_le_bytes());
    for v in m.iter() {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out
}

pub fn read_matrix(bytes: &[u8]) -> Result<Array2<f64>, CoreError> {
    if bytes.len() < 12 || &bytes[0..4] != MATRIX_MAGIC {
        return Err(CoreError::Parse("not an RMM1 matrix file".into()));
    }
    let rows = u32::from_le_bytes(bytes[4..8].try_into().unwrap()) as usize;
    let cols = u32::from_le_bytes(bytes[8..12].try_into().unwrap()) as usize;
    let want = 12 + rows * cols * 8;
    if bytes.len() != want {
        return Err(CoreError::Parse(format!(
            "matrix payload length {} != expected {}",
            bytes.len(),
            want
        )));
    }
    let values: Vec<f64> = bytes[12..]
        .chunks_exact(8)
        .map(|c| f64::from_le_bytes(c.try_into().unwrap()))
        .collect();
    Array2::from_shape_vec((rows, cols), values)
        .map_err(|e| CoreError::Parse(format!("matrix shape: {e}")))
}

pub fn save_matrix(m: &Array2<f64>, path: &Path) -> Result<(), CoreError> {
    Ok(std::fs::write(path, write_matrix(m))?)
}
