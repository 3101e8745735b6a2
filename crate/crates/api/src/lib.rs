//! Wire types for the HTTP/JSON service, shared by the server and the
//! client so both sides agree on one schema.
//!
//! Binary payloads (captures, knowledge indexes) ride inside JSON as
//! base64; the capture and index file formats themselves are defined by
//! `radmat-core` and `radmat-rag`.

use serde::{Deserialize, Serialize};

pub use radmat_core::config::RadarConfig;
pub use radmat_core::em::{Calibration, EmParameters};
pub use radmat_core::sim::SimTarget;
pub use radmat_reasoner::{CanonicalClass, MaterialVerdict, VerdictMode};

/// Route paths, version-prefixed.
pub mod paths {
    pub const HEALTH: &str = "/v1/health";
    pub const SIMULATE: &str = "/v1/simulate";
    pub const CALIBRATE: &str = "/v1/calibrate";
    pub const PROCESS: &str = "/v1/process";
    pub const INDEX: &str = "/v1/index";
    pub const IDENTIFY: &str = "/v1/identify";
    pub const REPORT: &str = "/v1/report";
    /// OpenAI-compatible deterministic stub; append `/chat/completions`.
    pub const STUB_LLM: &str = "/v1/stub-llm";
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HealthResponse {
    pub status: String,
    pub version: String,
}

/// JSON error body returned with every non-2xx status.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ErrorBody {
    pub code: String,
    pub error: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SimulateRequest {
    pub config: RadarConfig,
    pub targets: Vec<SimTarget>,
    /// Per-sample noise power; None means the config's thermal level.
    #[serde(default)]
    pub noise_power: Option<f64>,
    #[serde(default)]
    pub seed: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CalibrateQuery {
    pub sphere_diameter_m: f64,
    /// Override for the perfect-reflector reference reflectivity.
    #[serde(default)]
    pub rho_ref: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessQuery {
    /// Calibration constant K.
    pub k: f64,
    pub rho_ref: f64,
    /// Emit one record per detection instead of the strongest only.
    #[serde(default)]
    pub all_targets: bool,
    /// Also return the RD/RA power maps as binary matrix files (base64).
    #[serde(default)]
    pub include_maps: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProcessResponse {
    pub records: Vec<EmParameters>,
    /// Range-Doppler power map in the binary matrix format, when requested.
    #[serde(default)]
    pub rd_map_b64: Option<String>,
    /// Range-angle power map in the binary matrix format, when requested.
    #[serde(default)]
    pub ra_map_b64: Option<String>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocumentIn {
    pub doc_id: String,
    pub text: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexRequest {
    pub documents: Vec<DocumentIn>,
    #[serde(default = "default_chunk_size")]
    pub chunk_size: usize,
    #[serde(default = "default_overlap")]
    pub overlap: usize,
}

pub fn default_chunk_size() -> usize {
    512
}

pub fn default_overlap() -> usize {
    64
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct DocChunkCount {
    pub doc_id: String,
    pub chunks: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexResponse {
    /// The single-file index, base64-encoded.
    pub index_b64: String,
    pub chunk_counts: Vec<DocChunkCount>,
    pub total_chunks: usize,
}

/// LLM endpoint settings carried over the wire. `base_url = "stub:"`
/// selects the server-side deterministic responder.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct EndpointSpec {
    pub base_url: String,
    pub model: String,
    #[serde(default)]
    pub api_key: Option<String>,
    #[serde(default = "default_timeout_s")]
    pub timeout_s: f64,
    #[serde(default = "default_retries")]
    pub retries: u32,
}

pub fn default_timeout_s() -> f64 {
    120.0
}

pub fn default_retries() -> u32 {
    2
}

impl From<EndpointSpec> for radmat_reasoner::EndpointConfig {
    fn from(spec: EndpointSpec) -> Self {
        radmat_reasoner::EndpointConfig {
            base_url: spec.base_url,
            model: spec.model,
            api_key: spec.api_key,
            timeout: std::time::Duration::from_secs_f64(spec.timeout_s.max(0.001)),
            retries: spec.retries,
            ..radmat_reasoner::EndpointConfig::default()
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IdentifyRequest {
    pub params: EmParameters,
    /// Base64 knowledge index; required when with_rag and use_llm.
    #[serde(default)]
    pub index_b64: Option<String>,
    #[serde(default = "default_true")]
    pub with_rag: bool,
    #[serde(default = "default_true")]
    pub use_llm: bool,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    #[serde(default)]
    pub endpoint: Option<EndpointSpec>,
}

pub fn default_true() -> bool {
    true
}

pub fn default_top_k() -> usize {
    4
}

/// Identification mode of one report arm.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ReportMode {
    #[serde(rename = "rule")]
    Rule,
    #[serde(rename = "llm-norag")]
    LlmNoRag,
    #[serde(rename = "llm-rag")]
    LlmRag,
}

impl std::fmt::Display for ReportMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            ReportMode::Rule => "rule",
            ReportMode::LlmNoRag => "llm-norag",
            ReportMode::LlmRag => "llm-rag",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for ReportMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "rule" => Ok(ReportMode::Rule),
            "llm-norag" => Ok(ReportMode::LlmNoRag),
            "llm-rag" => Ok(ReportMode::LlmRag),
            other => Err(format!("unknown report mode `{other}` (rule | llm-norag | llm-rag)")),
        }
    }
}

/// One object of the evaluation suite. The simulated cross-section is
/// derived from the material's permittivity through the reflection and
/// cell-area relations; a perfect reflector instead injects a reflectivity
/// above the clamp ceiling.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportObject {
    pub label: String,
    /// Ground-truth class for scoring.
    pub material: CanonicalClass,
    #[serde(default)]
    pub epsilon_r: Option<f64>,
    #[serde(default)]
    pub perfect_reflector: bool,
    pub range_m: f64,
    #[serde(default)]
    pub velocity_mps: f64,
    #[serde(default)]
    pub angle_deg: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRequest {
    pub config: RadarConfig,
    pub objects: Vec<ReportObject>,
    pub modes: Vec<ReportMode>,
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub index_b64: Option<String>,
    #[serde(default)]
    pub endpoint: Option<EndpointSpec>,
    #[serde(default = "default_top_k")]
    pub top_k: usize,
    /// Sphere diameter used for the internal calibration pass.
    #[serde(default = "default_sphere_diameter")]
    pub sphere_diameter_m: f64,
}

pub fn default_sphere_diameter() -> f64 {
    0.063
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportRow {
    pub label: String,
    pub true_material: CanonicalClass,
    pub mode: ReportMode,
    pub params: EmParameters,
    pub verdict: MaterialVerdict,
    pub correct: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ModeSummary {
    pub mode: ReportMode,
    pub correct: usize,
    pub total: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ReportResponse {
    pub rows: Vec<ReportRow>,
    pub summaries: Vec<ModeSummary>,
    /// The calibration used for every object.
    pub calibration: Calibration,
}

/// Base64 helpers for the binary payload fields.
pub mod b64 {
    use base64::engine::general_purpose::STANDARD;
    use base64::Engine;

    pub fn encode(bytes: &[u8]) -> String {
        STANDARD.encode(bytes)
    }

    pub fn decode(text: &str) -> Result<Vec<u8>, String> {
        STANDARD
            .decode(text.trim())
            .map_err(|e| format!("bad base64 payload: {e}"))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn b64_round_trip() {
        let data = vec![0u8, 1, 2, 250, 255];
        assert_eq!(b64::decode(&b64::encode(&data)).unwrap(), data);
        assert!(b64::decode("!!!").is_err());
    }

    #[test]
    fn report_mode_parses() {
        assert_eq!("rule".parse::<ReportMode>().unwrap(), ReportMode::Rule);
        assert_eq!(
            "llm-rag".parse::<ReportMode>().unwrap(),
            ReportMode::LlmRag
        );
        assert!("nope".parse::<ReportMode>().is_err());
    }

    #[test]
    fn metal_epsilon_survives_json() {
        let em = EmParameters {
            detection: radmat_core::dsp::TargetDetection {
                range: 1.0,
                velocity: 0.0,
                angle: 0.0,
                snr_linear: 10.0,
                peak_bin: (1, 2, 3),
            },
            rcs: 0.01,
            rho: 1.4,
            gamma_f: 1.0,
            epsilon_r: f64::INFINITY,
            metal_like: true,
        };
        let json = serde_json::to_string(&em).unwrap();
        let back: EmParameters = serde_json::from_str(&json).unwrap();
        assert!(back.epsilon_r.is_infinite());
        assert!(back.metal_like);
    }
}
