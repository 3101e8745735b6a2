//! The raw radar data cube.

use ndarray::Array3;
use num_complex::Complex64;

use crate::config::RadarConfig;
use crate::error::CoreError;

/// 3D complex baseband samples, shape `[n_channels][n_chirps][n_samples]`,
/// in dimensionless ADC units. Immutable after construction.
///
/// Samples are held as f64 pairs for processing headroom; the on-disk
/// capture format stores f32 pairs, so a cube loaded from a capture always
/// holds exactly f32-representable values.
#[derive(Debug, Clone, PartialEq)]
pub struct RadarCube {
    config: RadarConfig,
    data: Array3<Complex64>,
}

impl RadarCube {
    /// Build a cube, checking that dimensions match the config and all
    /// samples are finite.
    pub fn new(config: RadarConfig, data: Array3<Complex64>) -> Result<Self, CoreError> {
        config.validate()?;
        let want = (config.n_channels, config.n_chirps, config.n_samples);
        if data.dim() != want {
            return Err(CoreError::InvalidConfig(format!(
                "cube shape {:?} does not match config {:?}",
                data.dim(),
                want
            )));
        }
        if data.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(CoreError::Domain("cube contains non-finite samples".into()));
        }
        Ok(RadarCube { config, data })
    }

    pub fn zeroed(config: RadarConfig) -> Result<Self, CoreError> {
        config.validate()?;
        let shape = (config.n_channels, config.n_chirps, config.n_samples);
        Ok(RadarCube {
            config,
            data: Array3::zeros(shape),
        })
    }

    pub fn config(&self) -> &RadarConfig {
        &self.config
    }

    pub fn data(&self) -> &Array3<Complex64> {
        &self.data
    }

    /// Sample count n_channels * n_chirps * n_samples.
    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Scaled copy (used by the linearity/invariance tests).
    pub fn scaled(&self, c: Complex64) -> Result<Self, CoreError> {
        let data = self.data.mapv(|z| z * c);
        RadarCube::new(self.config.clone(), data)
    }
}
