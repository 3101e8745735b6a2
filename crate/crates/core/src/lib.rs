//! Radar-based material sensing core: FMCW cube synthesis, range-Doppler and
//! range-angle processing, and recovery of a target's electromagnetic
//! signature (RCS, per-area reflectivity, reflection coefficient, relative
//! permittivity).
//!
//! Everything in this crate is pure and deterministic: the simulator is the
//! reference oracle for the processing chain, and the processing chain feeds
//! the material estimator. All internal quantities are SI (Hz, m, s, linear
//! power); decibels and degrees appear only at I/O boundaries.

pub mod capture;
pub mod config;
pub mod cube;
pub mod dsp;
pub mod em;
pub mod error;
pub mod kv;
pub mod pipeline;
pub mod scenario;
pub mod sim;
pub mod units;

pub use config::{angle_grid, RadarConfig};
pub use cube::RadarCube;
pub use dsp::{
    beam_pattern, beamform_doa, detect_targets, range_angle_map, range_doppler_map, BeamPattern,
    DetectorParams, RaMap, RdMap, SpectralCube, TargetDetection,
};
pub use em::{
    calibrate, estimate_em_parameters, fresnel_forward, gamma_from_rho, permittivity_from_gamma,
    power_reflection, prca_area, rcs_from_snr, Calibration, EmParameters, Prca,
};
pub use error::CoreError;
pub use sim::{received_power, sphere_rcs, synthesize_cube, NoiseSpec, SimTarget, SphereRcs};
