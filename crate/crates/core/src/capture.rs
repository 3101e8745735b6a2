//! Binary capture file format for raw radar cubes.
//!
//! Layout (all integers little-endian):
//!
//! ```text
//! magic   4 bytes  "RMC1"
//! version u32      1
//! cfg_len u32      length of the config snapshot
//! config  cfg_len  UTF-8 `key = value` text (same format as --config files)
//! dims    3 x u32  n_channels, n_chirps, n_samples (must match the config)
//! payload           n_channels*n_chirps*n_samples complex samples as
//!                  (f32 re, f32 im) pairs in [channel][chirp][sample] order
//! ```
//!
//! The payload is f32; writing quantizes f64 samples once, and reading
//! upcasts exactly, so read-write cycles on files are byte-stable and a cube
//! loaded from a capture survives write -> read bit-exactly.

use std::path::Path;

use ndarray::Array3;
use num_complex::Complex64;

use crate::config::RadarConfig;
use crate::cube::RadarCube;
use crate::error::CoreError;

pub const MAGIC: &[u8; 4] = b"RMC1";
pub const VERSION: u32 = 1;

/// Exact byte size of a capture for the given config.
pub fn capture_size(config: &RadarConfig) -> usize {
    let cfg_len = config.to_text().len();
    let payload = 2 * 4 * config.n_channels * config.n_chirps * config.n_samples;
    4 + 4 + 4 + cfg_len + 12 + payload
}

pub fn write_capture(cube: &RadarCube) -> Vec<u8> {
    let config = cube.config();
    let cfg_text = config.to_text().into_bytes();
    let mut out = Vec::with_capacity(capture_size(config));
    out.extend_from_slice(MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    out.extend_from_slice(&(cfg_text.len() as u32).to_le_bytes());
    out.extend_from_slice(&cfg_text);
    for d in [config.n_channels, config.n_chirps, config.n_samples] {
        out.extend_from_slice(&(d as u32).to_le_bytes());
    }
    for z in cube.data().iter() {
        out.extend_from_slice(&(z.re as f32).to_le_bytes());
        out.extend_from_slice(&(z.im as f32).to_le_bytes());
    }
    out
}

pub fn read_capture(bytes: &[u8]) -> Result<RadarCube, CoreError> {
    let bad = |msg: &str| CoreError::Capture(msg.to_string());

    let mut at = 0usize;
    let mut take = |n: usize| -> Result<&[u8], CoreError> {
        if at + n > bytes.len() {
            return Err(bad("truncated file"));
        }
        let s = &bytes[at..at + n];
        at += n;
        Ok(s)
    };

    if take(4)? != MAGIC {
        return Err(bad("bad magic (not an RMC1 capture)"));
    }
    let version = u32::from_le_bytes(take(4)?.try_into().unwrap());
    if version != VERSION {
        return Err(CoreError::Capture(format!("unsupported version {version}")));
    }
    let cfg_len = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
    let cfg_text = std::str::from_utf8(take(cfg_len)?)
        .map_err(|_| bad("config snapshot is not valid UTF-8"))?;
    let config = RadarConfig::from_text(cfg_text)?;

    let mut dims = [0usize; 3];
    for d in dims.iter_mut() {
        *d = u32::from_le_bytes(take(4)?.try_into().unwrap()) as usize;
    }
    if dims != [config.n_channels, config.n_chirps, config.n_samples] {
        return Err(CoreError::Capture(format!(
            "header dims {dims:?} do not match config ({}, {}, {})",
            config.n_channels, config.n_chirps, config.n_samples
        )));
    }

    let n = dims[0] * dims[1] * dims[2];
    let payload = take(n * 8)?;
    if at != bytes.len() {
        return Err(bad("trailing bytes after payload"));
    }
    let mut samples = Vec::with_capacity(n);
    for chunk in payload.chunks_exact(8) {
        let re = f32::from_le_bytes(chunk[0..4].try_into().unwrap());
        let im = f32::from_le_bytes(chunk[4..8].try_into().unwrap());
        samples.push(Complex64::new(re as f64, im as f64));
    }
    let data = Array3::from_shape_vec((dims[0], dims[1], dims[2]), samples)
        .map_err(|e| CoreError::Capture(format!("shape error: {e}")))?;
    RadarCube::new(config, data)
}

pub fn save_capture(cube: &RadarCube, path: &Path) -> Result<(), CoreError> {
    Ok(std::fs::write(path, write_capture(cube))?)
}

pub fn load_capture(path: &Path) -> Result<RadarCube, CoreError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CoreError::Capture(format!("cannot read {}: {e}", path.display())))?;
    read_capture(&bytes)
}
