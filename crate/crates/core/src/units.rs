//! Physical constants and dB conversions.

use crate::error::CoreError;

/// Speed of light in vacuum, m/s.
pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Boltzmann constant, J/K.
pub const BOLTZMANN: f64 = 1.380_649e-23;

/// Carrier wavelength c/f0, metres.
pub fn wavelength(f0_hz: f64) -> Result<f64, CoreError> {
    if !(f0_hz > 0.0) || !f0_hz.is_finite() {
        return Err(CoreError::InvalidConfig(format!(
            "carrier frequency must be positive and finite, got {f0_hz}"
        )));
    }
    Ok(SPEED_OF_LIGHT / f0_hz)
}

/// Linear power ratio to decibels.
pub fn db_from_linear(x: f64) -> Result<f64, CoreError> {
    if !(x > 0.0) {
        return Err(CoreError::Domain(format!(
            "dB conversion requires a positive power ratio, got {x}"
        )));
    }
    Ok(10.0 * x.log10())
}

/// Decibels to linear power ratio.
pub fn linear_from_db(db: f64) -> f64 {
    10f64.powf(db / 10.0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn wavelength_at_60ghz_is_about_5mm() {
        let lambda = wavelength(60e9).unwrap();
        assert_relative_eq!(lambda, 4.9965e-3, max_relative = 1e-3);
        // one metre at c Hz, by definition
        assert_relative_eq!(wavelength(SPEED_OF_LIGHT).unwrap(), 1.0);
        assert_relative_eq!(wavelength(30e9).unwrap(), 9.993e-3, max_relative = 1e-3);
    }

    #[test]
    fn wavelength_rejects_nonpositive_frequency() {
        assert!(wavelength(0.0).is_err());
        assert!(wavelength(-1.0).is_err());
        assert!(wavelength(f64::NAN).is_err());
    }

    #[test]
    fn db_conversions() {
        assert_relative_eq!(db_from_linear(1.0).unwrap(), 0.0);
        assert_relative_eq!(db_from_linear(100.0).unwrap(), 20.0);
        assert!(db_from_linear(0.0).is_err());
        assert!(db_from_linear(-3.0).is_err());
    }

    #[test]
    fn db_round_trip_is_tight() {
        let db = 37.2;
        let back = db_from_linear(linear_from_db(db)).unwrap();
        assert!((back - db).abs() < 1e-12, "round trip drifted: {back}");
    }
}
