//! End-to-end composition of the processing chain.
//!
//! These helpers glue the stages together the way the service and CLI use
//! them: cube -> spectra -> maps -> detections (with fine DoA refinement)
//! -> calibration or electromagnetic parameters.

use crate::config::angle_grid;
use crate::cube::RadarCube;
use crate::dsp::{
    beamform_doa, detect_targets_with, DetectorParams, RaMap, RdMap, SpectralCube, TargetDetection,
};
use crate::em::{calibrate, estimate_em_parameters, Calibration, EmParameters};
use crate::error::CoreError;

/// Steering points of the coarse range-angle map.
pub const COARSE_ANGLE_POINTS: usize = 512;

/// Everything the processing stage produces for one cube.
#[derive(Debug, Clone)]
pub struct ProcessedCube {
    pub rd: RdMap,
    pub ra: Option<RaMap>,
    /// Detections sorted by descending SNR, angles refined by fine
    /// beamforming where the array supports it.
    pub detections: Vec<TargetDetection>,
}

/// Run maps + detection + DoA refinement on a cube.
pub fn process_cube(cube: &RadarCube, params: &DetectorParams) -> Result<ProcessedCube, CoreError> {
    let config = cube.config().clone();
    let spectral = SpectralCube::compute(cube);
    let rd = spectral.rd_map();
    let ra = if config.n_channels >= 2 {
        Some(spectral.ra_map(&angle_grid(COARSE_ANGLE_POINTS))?)
    } else {
        None
    };
    let empty_ra = RaMap {
        power: ndarray::Array2::zeros((0, 0)),
        angle_grid: Vec::new(),
    };
    let mut detections = detect_targets_with(
        &rd,
        ra.as_ref().unwrap_or(&empty_ra),
        &config,
        params,
    );
    if config.n_channels >= 2 {
        for det in &mut detections {
            if let Ok(fine) =
                beamform_doa(&spectral, det.peak_bin.0, det.peak_bin.1, det.angle)
            {
                det.angle = fine;
            }
        }
    }
    Ok(ProcessedCube { rd, ra, detections })
}

/// Calibrate from a capture of a lone reference sphere. Zero or multiple
/// detections are a calibration ambiguity.
pub fn calibrate_from_cube(cube: &RadarCube, sphere_diameter: f64) -> Result<Calibration, CoreError> {
    let processed = process_cube(cube, &DetectorParams::default())?;
    match processed.detections.len() {
        1 => {}
        0 => {
            return Err(CoreError::CalibrationAmbiguity(
                "no target detected in the calibration capture".into(),
            ))
        }
        n => {
            return Err(CoreError::CalibrationAmbiguity(format!(
                "{n} targets detected; the calibration capture must contain exactly one sphere"
            )))
        }
    }
    let det = &processed.detections[0];
    let lambda = cube.config().wavelength()?;
    let mut cal = calibrate(det.snr_linear, det.range, sphere_diameter, lambda)?;
    cal.source = format!(
        "sphere d = {sphere_diameter} m detected at R = {:.4} m, SNR = {:.2} dB",
        det.range,
        10.0 * det.snr_linear.log10()
    );
    Ok(cal)
}

/// Estimate the electromagnetic signature of already-detected targets,
/// strongest first.
pub fn em_from_detections(
    detections: &[TargetDetection],
    cal: &Calibration,
    config: &crate::config::RadarConfig,
) -> Result<Vec<EmParameters>, CoreError> {
    if detections.is_empty() {
        return Err(CoreError::NoTarget);
    }
    detections
        .iter()
        .map(|det| estimate_em_parameters(det, cal, config))
        .collect()
}

/// Detect and estimate the electromagnetic signature of every target in a
/// capture, strongest first.
pub fn extract_em_parameters(
    cube: &RadarCube,
    cal: &Calibration,
) -> Result<Vec<EmParameters>, CoreError> {
    let processed = process_cube(cube, &DetectorParams::default())?;
    em_from_detections(&processed.detections, cal, cube.config())
}
