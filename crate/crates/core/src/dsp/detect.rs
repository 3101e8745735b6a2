//! Threshold + local-maximum target detection on the RD/RA maps.

use serde::{Deserialize, Serialize};

use super::spectral::{RaMap, RdMap};
use super::window::{erlang_median, snr_processing_gain};
use crate::config::RadarConfig;
use crate::units::SPEED_OF_LIGHT;

/// A localized target.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetDetection {
    /// Range, m (sub-bin interpolated).
    pub range: f64,
    /// Radial velocity, m/s; positive = approaching.
    pub velocity: f64,
    /// Azimuth from boresight, radians (coarse; refine with beamform_doa).
    pub angle: f64,
    /// Single-sample SNR, linear power ratio (window- and gain-corrected).
    pub snr_linear: f64,
    /// (range_bin, doppler_bin, angle_bin) of the detection peak.
    pub peak_bin: (usize, usize, usize),
}

/// Detection tuning.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    /// Threshold over the noise floor, dB.
    pub threshold_db: f64,
}

impl Default for DetectorParams {
    fn default() -> Self {
        DetectorParams { threshold_db: 13.0 }
    }
}

fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-12 {
        1.0
    } else {
        (std::f64::consts::PI * x).sin() / (std::f64::consts::PI * x)
    }
}

/// Sub-bin refinement matched to the Hann window (Grandke's two-bin ratio).
/// Returns (bin offset in [-0.5, 0.5], scalloping power correction >= 1).
///
/// The Hann mainlobe amplitude at offset d bins is sinc(d) / (1 - d^2) of
/// the on-bin response, so the offset follows from the magnitude ratio of
/// the peak and its larger neighbor, and the correction restores the
/// on-bin-equivalent peak power.
fn hann_refine(left: f64, center: f64, right: f64) -> (f64, f64) {
    if !(left > 0.0 && center > 0.0 && right > 0.0) {
        return (0.0, 1.0);
    }
    let (y1, y2, y3) = (left.sqrt(), center.sqrt(), right.sqrt());
    let delta = if y3 >= y1 {
        let alpha = y3 / y2;
        (2.0 * alpha - 1.0) / (alpha + 1.0)
    } else {
        let alpha = y1 / y2;
        -(2.0 * alpha - 1.0) / (alpha + 1.0)
    };
    let delta = delta.clamp(-0.5, 0.5);
    let amp_ratio = sinc(delta) / (1.0 - delta * delta);
    if !(amp_ratio > 0.0) {
        return (delta, 1.0);
    }
    (delta, (1.0 / amp_ratio) * (1.0 / amp_ratio))
}

/// Detect peaks above `noise_floor * threshold` that are local maxima over a
/// 3x3 range/Doppler neighborhood, convert each to (R, V, theta, SNR), and
/// sort by descending SNR. An empty map yields an empty list.
pub fn detect_targets(rd: &RdMap, ra: &RaMap, config: &RadarConfig) -> Vec<TargetDetection> {
    detect_targets_with(rd, ra, config, &DetectorParams::default())
}

pub fn detect_targets_with(
    rd: &RdMap,
    ra: &RaMap,
    config: &RadarConfig,
    params: &DetectorParams,
) -> Vec<TargetDetection> {
    let (n_r, n_d) = rd.power.dim();
    if n_r == 0 || n_d == 0 {
        return Vec::new();
    }
    let threshold = rd.noise_floor * 10f64.powf(params.threshold_db / 10.0);
    let range_step =
        SPEED_OF_LIGHT * config.fs / (2.0 * config.slope * config.n_samples as f64);
    let doppler_step = match config.doppler_bin_size() {
        Ok(v) => v,
        Err(_) => return Vec::new(),
    };
    let zero_doppler = config.n_chirps / 2;
    let gain = snr_processing_gain(config.n_samples, config.n_chirps);
    // median -> mean conversion for the m-channel non-coherent noise sum
    let m = config.n_channels;
    let median_to_mean = m as f64 / erlang_median(m);

    let at = |r: i64, d: i64| -> Option<f64> {
        if r < 0 || r >= n_r as i64 {
            return None; // range axis clamps at the edges
        }
        let d = d.rem_euclid(n_d as i64); // Doppler axis wraps
        Some(rd.power[(r as usize, d as usize)])
    };

    let mut detections = Vec::new();
    for r in 0..n_r {
        'cells: for d in 0..n_d {
            let p = rd.power[(r, d)];
            if !(p > threshold) || p <= 0.0 {
                continue;
            }
            for dr in -1i64..=1 {
                for dd in -1i64..=1 {
                    if dr == 0 && dd == 0 {
                        continue;
                    }
                    let Some(q) = at(r as i64 + dr, d as i64 + dd) else {
                        continue;
                    };
                    if q > p {
                        continue 'cells;
                    }
                    // deterministic tie-break: earlier scan order wins
                    if q == p {
                        let (nr_i, nd_i) =
                            ((r as i64 + dr), (d as i64 + dd).rem_euclid(n_d as i64));
                        if (nr_i, nd_i) < (r as i64, d as i64) {
                            continue 'cells;
                        }
                    }
                }
            }

            // sub-bin refinement in both axes
            let (dr_off, r_gain) = match (at(r as i64 - 1, d as i64), at(r as i64 + 1, d as i64)) {
                (Some(l), Some(rr)) => hann_refine(l, p, rr),
                _ => (0.0, 1.0),
            };
            let (dd_off, d_gain) = if n_d >= 3 {
                let l = at(r as i64, d as i64 - 1).unwrap();
                let rr = at(r as i64, d as i64 + 1).unwrap();
                hann_refine(l, p, rr)
            } else {
                (0.0, 1.0)
            };
            let vertex = p * r_gain * d_gain;

            let range = (r as f64 + dr_off).max(0.0) * range_step;
            let velocity = (d as f64 + dd_off - zero_doppler as f64) * doppler_step;

            // coarse angle: argmax of the RA row at this range bin
            let (angle_bin, angle) = if r < ra.power.dim().0 && !ra.angle_grid.is_empty() {
                let row = ra.power.row(r);
                let mut best = 0usize;
                for (i, &v) in row.iter().enumerate() {
                    if v > row[best] {
                        best = i;
                    }
                }
                (best, ra.angle_grid[best])
            } else {
                (0, 0.0)
            };

            let snr_linear = if rd.noise_floor > 0.0 {
                vertex / (rd.noise_floor * median_to_mean * gain)
            } else {
                f64::INFINITY
            };

            detections.push(TargetDetection {
                range,
                velocity,
                angle,
                snr_linear,
                peak_bin: (r, d, angle_bin),
            });
        }
    }
    detections.sort_by(|a, b| b.snr_linear.partial_cmp(&a.snr_linear).unwrap());
    detections
}
