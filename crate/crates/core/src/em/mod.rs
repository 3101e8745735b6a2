//! Electromagnetic material-parameter estimation.
//!
//! The chain after detection: reference-sphere calibration fixes the system
//! constant K in SNR = K * sigma / R^4; an unknown target's RCS follows
//! directly; dividing by the peak reflection cell area turns RCS into a
//! per-unit-area reflectivity; normalizing against a perfect reflector gives
//! the Fresnel reflection coefficient; and inverting the Fresnel relation
//! recovers relative permittivity.

mod fresnel;
mod record;

pub use fresnel::{fresnel_forward, permittivity_from_gamma, PermittivityEstimate};
pub use record::{em_record_from_str, em_record_to_string, em_records_from_str, em_records_to_string};

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::config::RadarConfig;
use crate::dsp::{beam_pattern, TargetDetection};
use crate::error::CoreError;
use crate::kv;
use crate::sim::sphere_rcs;

/// System calibration from a reference-sphere measurement.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    /// System constant K in SNR = K * sigma / R^4 (composite SI units).
    pub k: f64,
    /// Per-unit-area reflectivity of a perfect reflector; the normalization
    /// ceiling for the Fresnel coefficient. 1.0 by construction for a
    /// specular plate filling one peak reflection cell.
    pub rho_ref: f64,
    /// Provenance note (sphere diameter, range, scenario).
    pub source: String,
}

impl Calibration {
    pub fn validate(&self) -> Result<(), CoreError> {
        if !(self.k > 0.0) || !self.k.is_finite() || !(self.rho_ref > 0.0) || !self.rho_ref.is_finite()
        {
            return Err(CoreError::MissingCalibration(format!(
                "K = {}, rho_ref = {}",
                self.k, self.rho_ref
            )));
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        format!(
            "K = {}\nrho_ref = {}\nsource = {}\n",
            kv::fmt_f64(self.k),
            kv::fmt_f64(self.rho_ref),
            self.source
        )
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let block = kv::parse_flat(text)?;
        let cal = Calibration {
            k: block.require_f64("K")?,
            rho_ref: block.require_f64("rho_ref")?,
            source: block.get("source").unwrap_or_default().to_string(),
        };
        cal.validate()?;
        Ok(cal)
    }

    pub fn save(&self, path: &Path) -> Result<(), CoreError> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CoreError::MissingCalibration(format!("cannot read {}: {e}", path.display()))
        })?;
        Self::from_text(&text)
    }
}

/// Peak reflection cell: the small dominant specular region whose per-area
/// reflectivity is analyzed. One range bin deep, one half-power beamwidth
/// wide at the target range.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Prca {
    /// Cell area, m^2.
    pub area: f64,
    /// Range extent (one range bin), m.
    pub range_extent: f64,
    /// Cross-range extent R * HPBW, m.
    pub cross_range_extent: f64,
}

/// The eight-parameter electromagnetic signature handed to the reasoner.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmParameters {
    pub detection: TargetDetection,
    /// Radar cross section, m^2.
    pub rcs: f64,
    /// Per-unit-area power reflectivity sigma / A_r.
    pub rho: f64,
    /// Fresnel reflection coefficient, in [0, 1].
    pub gamma_f: f64,
    /// Relative permittivity (>= 1; +inf when metal-like).
    #[serde(with = "record::serde_epsilon")]
    pub epsilon_r: f64,
    /// Set when the reflectivity clamped at the perfect-reflector ceiling.
    pub metal_like: bool,
}

/// Invert the SNR relation on a reference sphere of known cross-section:
/// K = snr * R^4 / sigma_c.
pub fn calibrate(
    snr_linear: f64,
    range: f64,
    sphere_diameter: f64,
    wavelength: f64,
) -> Result<Calibration, CoreError> {
    if !(snr_linear > 0.0) || !snr_linear.is_finite() {
        return Err(CoreError::Domain(format!(
            "calibration SNR must be positive and finite, got {snr_linear}"
        )));
    }
    if !(range > 0.0) || !range.is_finite() {
        return Err(CoreError::Domain(format!(
            "calibration range must be positive, got {range}"
        )));
    }
    let sphere = sphere_rcs(sphere_diameter, wavelength)?;
    if sphere.small_sphere_warning {
        return Err(CoreError::Domain(format!(
            "sphere d = {sphere_diameter} m is below the optical regime (need d >= 10 wavelengths)"
        )));
    }
    Ok(Calibration {
        k: snr_linear * range.powi(4) / sphere.area,
        rho_ref: 1.0,
        source: format!("sphere d = {sphere_diameter} m at R = {range} m"),
    })
}

/// Closed-form system constant from the configuration:
/// K = Pt*Gt*Gr * lambda^2 / ((4 pi)^3 * k_B * Tn * B).
pub fn theoretical_k(config: &RadarConfig) -> Result<f64, CoreError> {
    let lambda = config.wavelength()?;
    Ok(config.pt_gt_gr * lambda * lambda
        / ((4.0 * std::f64::consts::PI).powi(3) * config.thermal_noise_power()))
}

/// Direct RCS of an unknown target: sigma = snr * R^4 / K.
pub fn rcs_from_snr(snr_linear: f64, range: f64, cal: &Calibration) -> Result<f64, CoreError> {
    cal.validate()?;
    if !(snr_linear > 0.0) || !snr_linear.is_finite() {
        return Err(CoreError::Domain(format!(
            "SNR must be positive and finite, got {snr_linear}"
        )));
    }
    if !(range > 0.0) || !range.is_finite() {
        return Err(CoreError::Domain(format!("range must be positive, got {range}")));
    }
    Ok(snr_linear * range.powi(4) / cal.k)
}

/// Peak reflection cell area at the detection's range: one range bin by the
/// beam's half-power arc R * HPBW, with the HPBW taken from the fine
/// beam-pattern scan at the detection's steering angle.
pub fn prca_area(detection: &TargetDetection, config: &RadarConfig) -> Result<Prca, CoreError> {
    if !(detection.range > 0.0) {
        return Err(CoreError::DegenerateGeometry(format!(
            "range {} m: no cell area at zero range",
            detection.range
        )));
    }
    let hpbw = beam_pattern(config.n_channels, detection.angle)?.hpbw;
    let range_extent = config.range_bin_size();
    let cross_range_extent = detection.range * hpbw;
    Ok(Prca {
        area: range_extent * cross_range_extent,
        range_extent,
        cross_range_extent,
    })
}

/// Per-unit-area power reflectivity rho = sigma / A_r.
pub fn power_reflection(sigma: f64, prca: &Prca) -> Result<f64, CoreError> {
    if !(prca.area > 0.0) || !prca.area.is_finite() {
        return Err(CoreError::DegenerateGeometry(format!(
            "peak reflection cell area must be positive, got {}",
            prca.area
        )));
    }
    if sigma < 0.0 || !sigma.is_finite() {
        return Err(CoreError::Domain(format!("RCS must be non-negative, got {sigma}")));
    }
    Ok(sigma / prca.area)
}

/// Normalized amplitude reflection coefficient with clamp bookkeeping.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GammaResult {
    pub gamma_f: f64,
    /// True when rho exceeded the perfect-reflector ceiling and the ratio
    /// was clamped to 1.
    pub clamped: bool,
}

/// Normalize reflectivity against the perfect-reflector reference:
/// gamma = sqrt(clamp(rho / rho_ref, 0, 1)).
pub fn gamma_from_rho(rho: f64, cal: &Calibration) -> Result<GammaResult, CoreError> {
    cal.validate()?;
    if rho < 0.0 || !rho.is_finite() {
        return Err(CoreError::Domain(format!(
            "reflectivity must be non-negative, got {rho}"
        )));
    }
    let ratio = rho / cal.rho_ref;
    Ok(GammaResult {
        gamma_f: ratio.clamp(0.0, 1.0).sqrt(),
        clamped: ratio > 1.0,
    })
}

/// Full estimation chain for one detection. A reflectivity clamp at the
/// perfect-reflector ceiling yields the metal-like record (gamma_f = 1,
/// epsilon_r = +inf) instead of an inversion error.
pub fn estimate_em_parameters(
    detection: &TargetDetection,
    cal: &Calibration,
    config: &RadarConfig,
) -> Result<EmParameters, CoreError> {
    cal.validate()?;
    let sigma = rcs_from_snr(detection.snr_linear, detection.range, cal)
        .map_err(|e| e.at_stage("rcs_from_snr"))?;
    let prca = prca_area(detection, config).map_err(|e| e.at_stage("prca_area"))?;
    let rho = power_reflection(sigma, &prca).map_err(|e| e.at_stage("power_reflection"))?;
    let gamma = gamma_from_rho(rho, cal).map_err(|e| e.at_stage("gamma_from_rho"))?;

    if gamma.clamped || gamma.gamma_f >= 1.0 {
        return Ok(EmParameters {
            detection: detection.clone(),
            rcs: sigma,
            rho,
            gamma_f: 1.0,
            epsilon_r: f64::INFINITY,
            metal_like: true,
        });
    }
    let est = permittivity_from_gamma(gamma.gamma_f, detection.angle)
        .map_err(|e| e.at_stage("permittivity_from_gamma"))?;
    Ok(EmParameters {
        detection: detection.clone(),
        rcs: sigma,
        rho,
        gamma_f: gamma.gamma_f,
        epsilon_r: est.epsilon_r,
        metal_like: false,
    })
}
