//! FMCW point-target baseband synthesizer.
//!
//! Produces physically consistent cubes under the stop-and-hop model: each
//! target contributes a beat tone at 2*R*S/c, a chirp-to-chirp Doppler phase
//! of 4*pi*V*T/lambda, and a channel-to-channel phase of pi*sin(theta) on the
//! half-wavelength array. Amplitudes follow the monostatic radar equation
//! (voltage proportional to sqrt of received power), so SNR, the R^4 law, and
//! RCS calibration are all exercisable end-to-end against known truth.

use std::f64::consts::PI;

use ndarray::Array3;
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::config::RadarConfig;
use crate::cube::RadarCube;
use crate::error::CoreError;
use crate::units::SPEED_OF_LIGHT;

/// A far-field point scatterer with known ground truth.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimTarget {
    /// Range from the radar, m.
    pub range: f64,
    /// Radial velocity, m/s; positive = approaching.
    pub velocity: f64,
    /// Azimuth from boresight, radians.
    pub angle: f64,
    /// Radar cross section, m^2.
    pub rcs: f64,
    /// Free-text description, e.g. "metal sphere d=63mm".
    pub label: String,
}

/// Thermal-style noise: circularly symmetric complex Gaussian per sample.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NoiseSpec {
    /// Total noise power per complex sample, linear.
    pub noise_power: f64,
    /// Seed; identical seed and spec give a bit-identical cube.
    pub rng_seed: u64,
}

impl NoiseSpec {
    /// Noise at the config's thermal level k*Tn*B.
    pub fn thermal(config: &RadarConfig, rng_seed: u64) -> Self {
        NoiseSpec {
            noise_power: config.thermal_noise_power(),
            rng_seed,
        }
    }

    /// Noiseless (deterministic zero noise).
    pub fn off() -> Self {
        NoiseSpec {
            noise_power: 0.0,
            rng_seed: 0,
        }
    }
}

/// Optical-regime sphere cross-section with a validity note.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SphereRcs {
    /// pi * (d/2)^2, m^2.
    pub area: f64,
    /// Set when diameter < 10 * wavelength and the optical-regime
    /// approximation is doubtful.
    pub small_sphere_warning: bool,
}

/// RCS of a conducting sphere in the optical regime: its physical
/// cross-sectional area pi*(d/2)^2.
pub fn sphere_rcs(diameter: f64, wavelength: f64) -> Result<SphereRcs, CoreError> {
    if !(diameter > 0.0) || !diameter.is_finite() {
        return Err(CoreError::Domain(format!(
            "sphere diameter must be positive, got {diameter}"
        )));
    }
    if !(wavelength > 0.0) || !wavelength.is_finite() {
        return Err(CoreError::Domain(format!(
            "wavelength must be positive, got {wavelength}"
        )));
    }
    Ok(SphereRcs {
        area: PI * (diameter / 2.0) * (diameter / 2.0),
        small_sphere_warning: diameter < 10.0 * wavelength,
    })
}

/// Echo power of a scatterer with cross-section `rcs` at `range` under the
/// monostatic radar equation, linear (per complex sample).
pub fn received_power(config: &RadarConfig, range: f64, rcs: f64) -> Result<f64, CoreError> {
    if !(range > 0.0) || !(rcs > 0.0) {
        return Err(CoreError::Domain(format!(
            "received power needs positive range and rcs, got {range}, {rcs}"
        )));
    }
    let lambda = config.wavelength()?;
    Ok(config.pt_gt_gr * lambda * lambda * rcs / ((4.0 * PI).powi(3) * range.powi(4)))
}

fn check_target(t: &SimTarget, config: &RadarConfig) -> Result<(), CoreError> {
    let reject = |field: &str, msg: String| {
        Err(CoreError::TargetRejected(format!(
            "target `{}`, field {field}: {msg}",
            t.label
        )))
    };
    if !(t.range > 0.0) || !t.range.is_finite() {
        return reject("range", format!("must be positive, got {}", t.range));
    }
    let r_max = config.max_unambiguous_range();
    if t.range >= r_max {
        return reject(
            "range",
            format!("{} m is outside the unambiguous range {r_max:.3} m", t.range),
        );
    }
    let v_max = config.max_unambiguous_velocity()?;
    if !t.velocity.is_finite() || t.velocity.abs() >= v_max {
        return reject(
            "velocity",
            format!(
                "{} m/s is outside the unambiguous interval (-{v_max:.3}, {v_max:.3}) m/s",
                t.velocity
            ),
        );
    }
    if !t.angle.is_finite() || t.angle.abs() > PI / 2.0 {
        return reject("angle", format!("must lie in [-pi/2, pi/2], got {}", t.angle));
    }
    if !(t.rcs > 0.0) || !t.rcs.is_finite() {
        return reject("rcs", format!("must be positive, got {}", t.rcs));
    }
    Ok(())
}

/// Synthesize a baseband cube for the given targets plus complex white
/// Gaussian noise. Targets superpose linearly; aliasing is rejected, never
/// silent.
pub fn synthesize_cube(
    config: &RadarConfig,
    targets: &[SimTarget],
    noise: &NoiseSpec,
) -> Result<RadarCube, CoreError> {
    config.validate()?;
    if !noise.noise_power.is_finite() || noise.noise_power < 0.0 {
        return Err(CoreError::Domain(format!(
            "noise power must be non-negative, got {}",
            noise.noise_power
        )));
    }
    for t in targets {
        check_target(t, config)?;
    }

    let lambda = config.wavelength()?;
    let (n_ch, n_chirps, n_samples) = (config.n_channels, config.n_chirps, config.n_samples);
    let mut acc = Array3::<Complex64>::zeros((n_ch, n_chirps, n_samples));

    for t in targets {
        // Amplitude is the square root of the radar-equation echo power.
        let amp = received_power(config, t.range, t.rcs)?.sqrt();
        let phase0 = -4.0 * PI * t.range / lambda;
        let beat = 2.0 * t.range * config.slope / SPEED_OF_LIGHT;
        let doppler = 2.0 * t.velocity / lambda;
        let channel_step = PI * t.angle.sin();

        let fast_step = 2.0 * PI * beat / config.fs;
        let slow_step = 2.0 * PI * doppler * config.chirp_interval;
        for m in 0..n_ch {
            let ch_phase = phase0 + channel_step * m as f64;
            for n in 0..n_chirps {
                let chirp_phase = ch_phase + slow_step * n as f64;
                for k in 0..n_samples {
                    let phase = chirp_phase + fast_step * k as f64;
                    acc[(m, n, k)] += Complex64::from_polar(amp, phase);
                }
            }
        }
    }

    if noise.noise_power > 0.0 {
        let mut rng = ChaCha8Rng::seed_from_u64(noise.rng_seed);
        let per_component = Normal::new(0.0, (noise.noise_power / 2.0).sqrt())
            .map_err(|e| CoreError::Domain(format!("noise spec: {e}")))?;
        for z in acc.iter_mut() {
            let re = per_component.sample(&mut rng);
            let im = per_component.sample(&mut rng);
            *z += Complex64::new(re, im);
        }
    }

    RadarCube::new(config.clone(), acc)
}
