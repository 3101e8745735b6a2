//! Radar chirp, array, and noise configuration.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::CoreError;
use crate::kv;
use crate::units::{self, BOLTZMANN, SPEED_OF_LIGHT};

/// FMCW radar parameters: the single source of truth for wavelength, bin
/// sizes, and the noise model. All fields SI.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RadarConfig {
    /// Carrier frequency, Hz.
    pub f0: f64,
    /// Chirp modulation slope, Hz/s.
    pub slope: f64,
    /// Swept bandwidth, Hz. Must equal slope * n_samples / fs within 0.1%.
    pub bandwidth: f64,
    /// ADC sampling rate, Hz (complex baseband).
    pub fs: f64,
    /// Samples per chirp.
    pub n_samples: usize,
    /// Chirps per frame.
    pub n_chirps: usize,
    /// Virtual receive channels on a half-wavelength uniform linear array.
    pub n_channels: usize,
    /// Chirp repetition interval, s.
    pub chirp_interval: f64,
    /// Combined transmit power and antenna gains Pt*Gt*Gr, linear.
    pub pt_gt_gr: f64,
    /// Effective noise temperature, K.
    pub tn: f64,
    /// Receiver noise bandwidth, Hz.
    pub noise_bandwidth: f64,
}

impl Default for RadarConfig {
    /// 60 GHz desk radar: 66 MHz/us slope, 3.96 GHz sweep, 10 MHz ADC,
    /// 600 samples x 128 chirps x 8 channels. `pt_gt_gr` is sized so the
    /// 63 mm reference sphere at 1 m measures 40 dB single-sample SNR.
    fn default() -> Self {
        RadarConfig {
            f0: 60e9,
            slope: 66e12,
            bandwidth: 3.96e9,
            fs: 10e6,
            n_samples: 600,
            n_chirps: 128,
            n_channels: 8,
            chirp_interval: 100e-6,
            pt_gt_gr: 10.209418046118811,
            tn: 290.0,
            noise_bandwidth: 10e6,
        }
    }
}

impl RadarConfig {
    /// Carrier wavelength c/f0, m.
    pub fn wavelength(&self) -> Result<f64, CoreError> {
        units::wavelength(self.f0)
    }

    /// Range bin size c/(2B), m.
    pub fn range_bin_size(&self) -> f64 {
        SPEED_OF_LIGHT / (2.0 * self.bandwidth)
    }

    /// Velocity bin size lambda/(2 * n_chirps * chirp_interval), m/s.
    pub fn doppler_bin_size(&self) -> Result<f64, CoreError> {
        Ok(self.wavelength()? / (2.0 * self.n_chirps as f64 * self.chirp_interval))
    }

    /// Largest beat frequency the ADC can represent maps to this range, m.
    pub fn max_unambiguous_range(&self) -> f64 {
        self.fs * SPEED_OF_LIGHT / (2.0 * self.slope)
    }

    /// Nyquist velocity lambda/(4 * chirp_interval), m/s.
    pub fn max_unambiguous_velocity(&self) -> Result<f64, CoreError> {
        Ok(self.wavelength()? / (4.0 * self.chirp_interval))
    }

    /// Thermal noise power k * Tn * B, W (linear, per complex sample).
    pub fn thermal_noise_power(&self) -> f64 {
        BOLTZMANN * self.tn * self.noise_bandwidth
    }

    /// Bandwidth actually swept over the sampled window, slope * n_samples / fs.
    pub fn processed_bandwidth(&self) -> f64 {
        self.slope * self.n_samples as f64 / self.fs
    }

    pub fn validate(&self) -> Result<(), CoreError> {
        let fail = |msg: String| Err(CoreError::InvalidConfig(msg));
        for (name, v) in [
            ("f0", self.f0),
            ("slope", self.slope),
            ("bandwidth", self.bandwidth),
            ("fs", self.fs),
            ("chirp_interval", self.chirp_interval),
            ("pt_gt_gr", self.pt_gt_gr),
            ("tn", self.tn),
            ("noise_bandwidth", self.noise_bandwidth),
        ] {
            if !(v > 0.0) || !v.is_finite() {
                return fail(format!("{name} must be positive and finite, got {v}"));
            }
        }
        if self.n_samples < 2 {
            return fail(format!("n_samples must be >= 2, got {}", self.n_samples));
        }
        if self.n_chirps < 1 {
            return fail("n_chirps must be >= 1".into());
        }
        if self.n_channels < 1 {
            return fail("n_channels must be >= 1".into());
        }
        // The sampled window must fit within the chirp repetition interval.
        let sample_window = self.n_samples as f64 / self.fs;
        if self.chirp_interval + 1e-12 < sample_window {
            return fail(format!(
                "chirp_interval {} s shorter than the sampled window {} s",
                self.chirp_interval, sample_window
            ));
        }
        let swept = self.processed_bandwidth();
        let rel = (swept - self.bandwidth).abs() / self.bandwidth;
        if rel > 1e-3 {
            return fail(format!(
                "sweep inconsistency: slope*n_samples/fs = {swept} Hz vs bandwidth = {} Hz ({:.3}% off)",
                self.bandwidth,
                rel * 100.0
            ));
        }
        Ok(())
    }

    /// Render as the `key = value` text format.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (k, v) in [
            ("f0", self.f0),
            ("slope", self.slope),
            ("bandwidth", self.bandwidth),
            ("fs", self.fs),
        ] {
            out.push_str(&format!("{k} = {}\n", kv::fmt_f64(v)));
        }
        out.push_str(&format!("n_samples = {}\n", self.n_samples));
        out.push_str(&format!("n_chirps = {}\n", self.n_chirps));
        out.push_str(&format!("n_channels = {}\n", self.n_channels));
        for (k, v) in [
            ("chirp_interval", self.chirp_interval),
            ("pt_gt_gr", self.pt_gt_gr),
            ("tn", self.tn),
            ("noise_bandwidth", self.noise_bandwidth),
        ] {
            out.push_str(&format!("{k} = {}\n", kv::fmt_f64(v)));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, CoreError> {
        let block = kv::parse_flat(text)?;
        let cfg = RadarConfig {
            f0: block.require_f64("f0")?,
            slope: block.require_f64("slope")?,
            bandwidth: block.require_f64("bandwidth")?,
            fs: block.require_f64("fs")?,
            n_samples: block.require_usize("n_samples")?,
            n_chirps: block.require_usize("n_chirps")?,
            n_channels: block.require_usize("n_channels")?,
            chirp_interval: block.require_f64("chirp_interval")?,
            pt_gt_gr: block.require_f64("pt_gt_gr")?,
            tn: block.require_f64("tn")?,
            noise_bandwidth: block.require_f64("noise_bandwidth")?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn save(&self, path: &Path) -> Result<(), CoreError> {
        Ok(std::fs::write(path, self.to_text())?)
    }

    pub fn load(path: &Path) -> Result<Self, CoreError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CoreError::Parse(format!("cannot read config {}: {e}", path.display())))?;
        Self::from_text(&text)
    }
}

/// Angle grid of `n_points` steering angles spanning [-pi/2, pi/2],
/// uniform in sine space (the natural FFT-beamforming spacing).
pub fn angle_grid(n_points: usize) -> Vec<f64> {
    if n_points == 0 {
        return Vec::new();
    }
    if n_points == 1 {
        return vec![0.0];
    }
    (0..n_points)
        .map(|i| {
            let s = -1.0 + 2.0 * i as f64 / (n_points - 1) as f64;
            s.clamp(-1.0, 1.0).asin()
        })
        .collect()
}
