//! Array beam pattern and fine direction-of-arrival estimation.

use num_complex::Complex64;

use super::spectral::SpectralCube;
use crate::cube::RadarCube;
use crate::error::CoreError;

/// Delay-and-sum beam pattern of the half-wavelength uniform linear array,
/// steered to `steer` and scanned over the visible region.
#[derive(Debug, Clone)]
pub struct BeamPattern {
    /// Scan angles, radians.
    pub angles: Vec<f64>,
    /// Normalized power gains; peak is exactly 1 at the steering angle.
    pub gains: Vec<f64>,
    /// Half-power (-3 dB) beamwidth, radians.
    pub hpbw: f64,
}

/// Scan step of the beam pattern, 0.01 degrees.
const PATTERN_STEP_DEG: f64 = 0.01;
/// Fine DoA scan: +/- 20 degrees around the coarse estimate in 0.1 degree steps.
const DOA_WINDOW_DEG: f64 = 20.0;
const DOA_STEP_DEG: f64 = 0.1;

fn array_power(n_channels: usize, u_target: f64, u_steer: f64) -> f64 {
    let psi = std::f64::consts::PI * (u_target - u_steer);
    let mut acc = Complex64::default();
    for m in 0..n_channels {
        acc += Complex64::from_polar(1.0, psi * m as f64);
    }
    acc.norm_sqr() / (n_channels * n_channels) as f64
}

/// Numerically scan the array factor for the given channel count and
/// steering angle, locating the half-power points by linear interpolation.
pub fn beam_pattern(n_channels: usize, steer: f64) -> Result<BeamPattern, CoreError> {
    if n_channels < 2 {
        return Err(CoreError::Unsupported(
            "beam pattern requires at least 2 channels".into(),
        ));
    }
    if !steer.is_finite() || steer.abs() > std::f64::consts::FRAC_PI_2 {
        return Err(CoreError::Domain(format!(
            "steering angle must lie in [-pi/2, pi/2], got {steer}"
        )));
    }
    let u0 = steer.sin();
    let step = PATTERN_STEP_DEG.to_radians();
    let n_pts = (std::f64::consts::PI / step).round() as usize + 1;
    let mut angles = Vec::with_capacity(n_pts);
    let mut gains = Vec::with_capacity(n_pts);
    for i in 0..n_pts {
        let phi = -std::f64::consts::FRAC_PI_2 + i as f64 * step;
        let phi = phi.clamp(-std::f64::consts::FRAC_PI_2, std::f64::consts::FRAC_PI_2);
        angles.push(phi);
        gains.push(array_power(n_channels, phi.sin(), u0));
    }

    // Peak index closest to the steering angle.
    let peak = angles
        .iter()
        .enumerate()
        .min_by(|(_, a), (_, b)| {
            (**a - steer).abs().partial_cmp(&(**b - steer).abs()).unwrap()
        })
        .map(|(i, _)| i)
        .unwrap();

    let half_cross = |from: usize, dir: i64| -> Option<f64> {
        let mut i = from as i64;
        loop {
            let j = i + dir;
            if j < 0 || j as usize >= gains.len() {
                return None;
            }
            let (gi, gj) = (gains[i as usize], gains[j as usize]);
            if gi >= 0.5 && gj < 0.5 {
                // linear interpolation of the 0.5 crossing
                let t = (gi - 0.5) / (gi - gj);
                return Some(angles[i as usize] + t * (angles[j as usize] - angles[i as usize]));
            }
            i = j;
        }
    };
    let left = half_cross(peak, -1);
    let right = half_cross(peak, 1);
    let (left, right) = match (left, right) {
        (Some(l), Some(r)) => (l, r),
        _ => {
            return Err(CoreError::DegenerateGeometry(
                "half-power points fall outside the visible region".into(),
            ))
        }
    };
    Ok(BeamPattern {
        angles,
        gains,
        hpbw: right - left,
    })
}

/// Refine a detection's direction of arrival: scan delay-and-sum power on a
/// 0.1 degree grid around the coarse estimate using the complex channel
/// snapshot at the detected range/Doppler cell, and return the argmax.
///
/// Errors with an ambiguity if the scanned pattern has no dominant peak
/// (peak under 3 dB above the local median).
pub fn beamform_doa(
    spectral: &SpectralCube,
    range_bin: usize,
    doppler_bin: usize,
    coarse_angle: f64,
) -> Result<f64, CoreError> {
    let snapshot = spectral.snapshot(range_bin, doppler_bin)?;
    doa_from_snapshot(&snapshot, coarse_angle)
}

/// As [`beamform_doa`], recomputing the spectra from a raw cube.
pub fn beamform_doa_cube(
    cube: &RadarCube,
    range_bin: usize,
    doppler_bin: usize,
    coarse_angle: f64,
) -> Result<f64, CoreError> {
    beamform_doa(&SpectralCube::compute(cube), range_bin, doppler_bin, coarse_angle)
}

pub(crate) fn doa_from_snapshot(snapshot: &[Complex64], coarse_angle: f64) -> Result<f64, CoreError> {
    if snapshot.len() < 2 {
        return Err(CoreError::Unsupported(
            "DoA refinement requires at least 2 channels".into(),
        ));
    }
    if !coarse_angle.is_finite() || coarse_angle.abs() > std::f64::consts::FRAC_PI_2 {
        return Err(CoreError::Domain(format!(
            "coarse angle must lie in [-pi/2, pi/2], got {coarse_angle}"
        )));
    }
    let step = DOA_STEP_DEG.to_radians();
    let lo = (coarse_angle - DOA_WINDOW_DEG.to_radians()).max(-std::f64::consts::FRAC_PI_2);
    let hi = (coarse_angle + DOA_WINDOW_DEG.to_radians()).min(std::f64::consts::FRAC_PI_2);
    let n = ((hi - lo) / step).floor() as usize + 1;

    let mut best_angle = lo;
    let mut best_power = f64::MIN;
    let mut powers = Vec::with_capacity(n);
    for i in 0..n {
        let phi = (lo + i as f64 * step).min(hi);
        let u = std::f64::consts::PI * phi.sin();
        let mut acc = Complex64::default();
        for (m, z) in snapshot.iter().enumerate() {
            acc += z * Complex64::from_polar(1.0, -u * m as f64);
        }
        let p = acc.norm_sqr();
        powers.push(p);
        if p > best_power {
            best_power = p;
            best_angle = phi;
        }
    }

    powers.sort_unstable_by(|a, b| a.partial_cmp(b).unwrap());
    let median = powers[powers.len() / 2];
    if best_power <= 0.0 || best_power < 2.0 * median {
        return Err(CoreError::AmbiguousDoa(format!(
            "peak {:.2} dB above local median (need 3 dB)",
            if median > 0.0 {
                10.0 * (best_power / median).log10()
            } else {
                0.0
            }
        )));
    }
    Ok(best_angle)
}
