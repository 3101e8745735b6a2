//! Range-Doppler / range-angle processing and target detection.
//!
//! The chain: per-channel Hann-windowed FFTs over fast time then slow time,
//! non-coherent accumulation into a range-Doppler map, Doppler-integrated
//! delay-and-sum beamforming into a range-angle map, threshold + local-max
//! detection with sub-bin peak interpolation, and fine-grid direction of
//! arrival refinement.
//!
//! Reported SNR is referenced to a single complex sample (the radar-equation
//! convention): map-level SNR is divided by the window-corrected FFT
//! processing gain, and the median noise floor is converted to a mean via
//! the Erlang order statistic for the channel count.

mod beam;
mod detect;
mod export;
mod spectral;
mod window;

pub use beam::{beam_pattern, beamform_doa, beamform_doa_cube, BeamPattern};
pub use detect::{detect_targets, detect_targets_with, DetectorParams, TargetDetection};
pub use export::{read_matrix, save_matrix, write_matrix, MATRIX_MAGIC};
pub use spectral::{range_angle_map, range_doppler_map, RaMap, RdMap, SpectralCube};
pub use window::{erlang_median, hann, snr_processing_gain};
