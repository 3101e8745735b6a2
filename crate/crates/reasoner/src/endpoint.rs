//! Chat-completion endpoints: an HTTP client for OpenAI-compatible servers
//! (Ollama, vLLM, and friends) and a deterministic in-process stub.

use std::time::Duration;

use serde_json::{json, Value};

use crate::error::ReasonerError;
use crate::rules::{rule_based_classify, RuleTable};

/// Endpoint settings. The API key is never logged; `Debug` redacts it.
#[derive(Clone)]
pub struct EndpointConfig {
    /// Base URL up to the API root, e.g. `http://127.0.0.1:11434/v1`.
    /// The scheme `stub:` selects the built-in deterministic responder.
    pub base_url: String,
    pub model: String,
    pub api_key: Option<String>,
    pub timeout: Duration,
    /// Retries after the first attempt (transport failures and 5xx).
    pub retries: u32,
    /// Base backoff; doubles per retry.
    pub backoff: Duration,
}

pub const ENV_BASE_URL: &str = "RADMAT_LLM_BASE_URL";
pub const ENV_MODEL: &str = "RADMAT_LLM_MODEL";
pub const ENV_API_KEY: &str = "RADMAT_LLM_API_KEY";

impl Default for EndpointConfig {
    fn default() -> Self {
        EndpointConfig {
            base_url: "http://127.0.0.1:11434/v1".into(),
            model: "deepseek-r1:14b".into(),
            api_key: None,
            timeout: Duration::from_secs(120),
            retries: 2,
            backoff: Duration::from_millis(500),
        }
    }
}

impl std::fmt::Debug for EndpointConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EndpointConfig")
            .field("base_url", &self.base_url)
            .field("model", &self.model)
            .field("api_key", &self.api_key.as_ref().map(|_| "<redacted>"))
            .field("timeout", &self.timeout)
            .field("retries", &self.retries)
            .field("backoff", &self.backoff)
            .finish()
    }
}

impl EndpointConfig {
    /// Overlay the RADMAT_LLM_* environment variables.
    pub fn apply_env_overrides(mut self) -> Self {
        if let Ok(v) = std::env::var(ENV_BASE_URL) {
            if !v.is_empty() {
                self.base_url = v;
            }
        }
        if let Ok(v) = std::env::var(ENV_MODEL) {
            if !v.is_empty() {
                self.model = v;
            }
        }
        if let Ok(v) = std::env::var(ENV_API_KEY) {
            if !v.is_empty() {
                self.api_key = Some(v);
            }
        }
        self
    }
}

/// A configured endpoint ready to answer one prompt at a time.
pub enum ChatEndpoint {
    Http(HttpChat),
    Stub(StubChat),
}

impl ChatEndpoint {
    pub fn from_config(cfg: EndpointConfig) -> Result<Self, ReasonerError> {
        if cfg.base_url.starts_with("stub:") {
            Ok(ChatEndpoint::Stub(StubChat::default()))
        } else if cfg.base_url.starts_with("http://") || cfg.base_url.starts_with("https://") {
            Ok(ChatEndpoint::Http(HttpChat::new(cfg)?))
        } else {
            Err(ReasonerError::InvalidEndpoint(format!(
                "unsupported endpoint URL `{}` (expected http://, https:// or stub:)",
                cfg.base_url
            )))
        }
    }

    pub async fn complete(&self, system: &str, user: &str) -> Result<String, ReasonerError> {
        match self {
            ChatEndpoint::Http(h) => h.complete(system, user).await,
            ChatEndpoint::Stub(s) => Ok(s.complete(user)),
        }
    }
}

/// Chat-completion client for an OpenAI-compatible HTTP endpoint with
/// bounded retries and exponential backoff.
pub struct HttpChat {
    cfg: EndpointConfig,
    client: reqwest::Client,
}

impl HttpChat {
    pub fn new(cfg: EndpointConfig) -> Result<Self, ReasonerError> {
        let client = reqwest::Client::builder()
            .timeout(cfg.timeout)
            .build()
            .map_err(|e| ReasonerError::InvalidEndpoint(e.to_string()))?;
        Ok(HttpChat { cfg, client })
    }

    pub fn config(&self) -> &EndpointConfig {
        &self.cfg
    }

    pub async fn complete(&self, system: &str, user: &str) -> Result<String, ReasonerError> {
        let url = format!(
            "{}/chat/completions",
            self.cfg.base_url.trim_end_matches('/')
        );
        let body = json!({
            "model": self.cfg.model,
            "messages": [
                {"role": "system", "content": system},
                {"role": "user", "content": user},
            ],
            "stream": false,
        });

        let attempts = self.cfg.retries + 1;
        let mut last_error = String::new();
        for attempt in 0..attempts {
            if attempt > 0 {
                tokio::time::sleep(self.cfg.backoff * 2u32.pow(attempt - 1)).await;
            }
            let mut req = self.client.post(&url).json(&body);
            if let Some(key) = &self.cfg.api_key {
                req = req.bearer_auth(key);
            }
            match req.send().await {
                Err(e) => {
                    last_error = e.to_string();
                }
                Ok(resp) => {
                    let status = resp.status();
                    if status.is_success() {
                        let value: Value = resp
                            .json()
                            .await
                            .map_err(|e| ReasonerError::MalformedResponse(e.to_string()))?;
                        return extract_content(&value);
                    }
                    let excerpt = excerpt(&resp.text().await.unwrap_or_default());
                    if status.is_server_error() {
                        // retryable
                        last_error = format!("status {status}: {excerpt}");
                    } else {
                        return Err(ReasonerError::EndpointStatus {
                            status: status.as_u16(),
                            excerpt,
                        });
                    }
                }
            }
        }
        Err(ReasonerError::EndpointUnreachable {
            attempts,
            last: last_error,
        })
    }
}

fn excerpt(body: &str) -> String {
    let trimmed = body.trim();
    if trimmed.len() <= 256 {
        trimmed.to_string()
    } else {
        let mut end = 256;
        while !trimmed.is_char_boundary(end) {
            end -= 1;
        }
        format!("{}...", &trimmed[..end])
    }
}

/// Pull the assistant text out of a chat-completion response. Accepts the
/// OpenAI `choices[0].message.content` shape and the bare `message.content`
/// shape some local servers return.
fn extract_content(value: &Value) -> Result<String, ReasonerError> {
    if let Some(text) = value
        .pointer("/choices/0/message/content")
        .and_then(Value::as_str)
    {
        return Ok(text.to_string());
    }
    if let Some(text) = value.pointer("/message/content").and_then(Value::as_str) {
        return Ok(text.to_string());
    }
    Err(ReasonerError::MalformedResponse(format!(
        "no completion text in response: {}",
        excerpt(&value.to_string())
    )))
}

/// Deterministic stand-in for a live model: it reads the parameter block out
/// of the prompt and answers through the same rule table as the offline
/// classifier, with a fixed reasoning script.
#[derive(Debug, Clone, Default)]
pub struct StubChat {
    pub rules: RuleTable,
}

impl StubChat {
    pub fn complete(&self, user_text: &str) -> String {
        stub_completion(user_text, &self.rules)
    }
}

/// The stub's reply for a prompt. Shared by the in-process endpoint and the
/// service's stub chat-completions route.
pub fn stub_completion(user_text: &str, rules: &RuleTable) -> String {
    // recover the parameter block from the prompt text
    let mut block = String::new();
    for line in user_text.lines() {
        let line = line.trim();
        if line.split_once('=').is_some() {
            block.push_str(line);
            block.push('\n');
        }
    }
    let Ok(params) = radmat_core::em::em_record_from_str(&block) else {
        return "The measured parameter block is missing, so no material \
                conclusion can be drawn."
            .to_string();
    };
    let verdict = rule_based_classify(&params, rules);
    format!(
        "Working through the measurements: the echo SNR is {:.1} dB at {:.2} m, giving a radar \
         cross section of {:.4e} m^2. The per-area reflectivity {:.4} corresponds to a reflection \
         coefficient of {:.3}, and the inferred relative permittivity is {}. {}.\nMATERIAL: {}",
        10.0 * params.detection.snr_linear.log10(),
        params.detection.range,
        params.rcs,
        params.rho,
        params.gamma_f,
        if params.epsilon_r.is_infinite() {
            "unbounded (conductor-like)".to_string()
        } else {
            format!("{:.2}", params.epsilon_r)
        },
        verdict.rationale,
        verdict.label
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::assemble_prompt;
    use crate::verdict::{parse_verdict, CanonicalClass};
    use radmat_core::dsp::TargetDetection;
    use radmat_core::em::EmParameters;

    fn params(eps: f64, gamma: f64, metal: bool) -> EmParameters {
        EmParameters {
            detection: TargetDetection {
                range: 1.2,
                velocity: 0.0,
                angle: 0.0,
                snr_linear: 900.0,
                peak_bin: (0, 0, 0),
            },
            rcs: 0.0011,
            rho: gamma * gamma,
            gamma_f: gamma,
            epsilon_r: eps,
            metal_like: metal,
        }
    }

    #[test]
    fn stub_reads_the_prompt_and_answers_consistently() {
        let p = assemble_prompt(&params(6.5, 0.44, false), &[], false);
        let reply = stub_completion(&p.user_text(), &RuleTable::default());
        let verdict = parse_verdict(&reply);
        assert_eq!(verdict.canonical_class, CanonicalClass::Ceramic);
        // deterministic
        assert_eq!(reply, stub_completion(&p.user_text(), &RuleTable::default()));
    }

    #[test]
    fn stub_without_a_parameter_block_yields_unknown() {
        let reply = stub_completion("no parameters here", &RuleTable::default());
        assert_eq!(parse_verdict(&reply).canonical_class, CanonicalClass::Unknown);
    }

    #[test]
    fn stub_scheme_selects_the_stub() {
        let cfg = EndpointConfig {
            base_url: "stub:".into(),
            ..EndpointConfig::default()
        };
        assert!(matches!(
            ChatEndpoint::from_config(cfg),
            Ok(ChatEndpoint::Stub(_))
        ));
        let cfg = EndpointConfig {
            base_url: "gopher://nope".into(),
            ..EndpointConfig::default()
        };
        assert!(ChatEndpoint::from_config(cfg).is_err());
    }

    #[test]
    fn debug_redacts_the_key() {
        let cfg = EndpointConfig {
            api_key: Some("super-secret".into()),
            ..EndpointConfig::default()
        };
        let s = format!("{cfg:?}");
        assert!(!s.contains("super-secret"));
        assert!(s.contains("redacted"));
    }

    #[test]
    fn content_extraction_handles_both_shapes() {
        let openai = serde_json::json!({"choices": [{"message": {"content": "hi"}}]});
        assert_eq!(extract_content(&openai).unwrap(), "hi");
        let bare = serde_json::json!({"message": {"content": "yo"}});
        assert_eq!(extract_content(&bare).unwrap(), "yo");
        assert!(extract_content(&serde_json::json!({"nope": 1})).is_err());
    }
}
