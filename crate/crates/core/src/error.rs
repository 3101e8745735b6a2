//! Error type shared by the radar core.

/// Errors from configuration, simulation, processing, and estimation.
#[derive(Debug, thiserror::Error)]
pub enum CoreError {
    #[error("invalid config: {0}")]
    InvalidConfig(String),

    #[error("domain error: {0}")]
    Domain(String),

    /// A simulated target violates the unambiguous range/velocity limits.
    #[error("target rejected: {0}")]
    TargetRejected(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    /// Fine beamforming found no dominant peak over the scan window.
    #[error("ambiguous direction of arrival: {0}")]
    AmbiguousDoa(String),

    #[error("missing or invalid calibration: {0}")]
    MissingCalibration(String),

    /// Zero or multiple detections where exactly one reference target is required.
    #[error("calibration ambiguity: {0}")]
    CalibrationAmbiguity(String),

    #[error("degenerate geometry: {0}")]
    DegenerateGeometry(String),

    /// Input at the boundary of validity (e.g. unity reflection coefficient).
    #[error("singular input: {0}")]
    SingularInput(String),

    #[error("permittivity inversion failed: {0}")]
    InversionFailure(String),

    #[error("no target detected")]
    NoTarget,

    #[error("parse error: {0}")]
    Parse(String),

    #[error("malformed capture: {0}")]
    Capture(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    /// Wraps an error from a named stage of a composed chain.
    #[error("{stage}: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<CoreError>,
    },
}

impl CoreError {
    /// Label an error with the pipeline stage it came from.
    pub fn at_stage(self, stage: &str) -> CoreError {
        CoreError::Stage {
            stage: stage.to_string(),
            source: Box::new(self),
        }
    }
}
