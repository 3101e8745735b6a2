//! The identification entry point: retrieval, prompting, inference, parsing.

use radmat_core::em::EmParameters;
use radmat_core::kv;
use radmat_rag::{HashedBagOfWords, KnowledgeIndex};

use crate::endpoint::ChatEndpoint;
use crate::error::ReasonerError;
use crate::prompt::{assemble_prompt, ContextChunk};
use crate::rules::{rule_based_classify, RuleTable};
use crate::verdict::{parse_verdict, MaterialVerdict, VerdictMode};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IdentifyOptions {
    pub with_rag: bool,
    pub use_llm: bool,
    /// Retrieved chunk count.
    pub top_k: usize,
    /// Fall back to the rule table when the endpoint fails (explicit opt-in;
    /// endpoint errors propagate otherwise).
    pub rule_fallback: bool,
}

impl Default for IdentifyOptions {
    fn default() -> Self {
        IdentifyOptions {
            with_rag: true,
            use_llm: true,
            top_k: 4,
            rule_fallback: false,
        }
    }
}

/// Fixed retrieval template naming the four electromagnetic features.
pub fn retrieval_query(params: &EmParameters) -> String {
    format!(
        "material identification from radar electromagnetic signature: \
         radar cross section rcs_m2 = {}, power reflection coefficient rho = {}, \
         fresnel reflection coefficient gamma_f = {}, relative permittivity epsilon_r = {}",
        kv::fmt_f64(params.rcs),
        kv::fmt_f64(params.rho),
        kv::fmt_f64(params.gamma_f),
        kv::fmt_f64(params.epsilon_r),
    )
}

/// Identify the material behind a parameter record.
///
/// With `use_llm` off the rule table answers directly (no index or endpoint
/// needed). Otherwise the prompt is assembled, conditioned on the top-k
/// retrieved chunks when `with_rag` is set, sent to the endpoint, and the
/// reply parsed; the verdict records its mode and the sources used.
pub async fn identify(
    params: &EmParameters,
    index: Option<&KnowledgeIndex>,
    endpoint: Option<&ChatEndpoint>,
    rules: &RuleTable,
    opts: &IdentifyOptions,
) -> Result<MaterialVerdict, ReasonerError> {
    if !opts.use_llm {
        return Ok(rule_based_classify(params, rules));
    }

    let chunks: Vec<ContextChunk> = if opts.with_rag {
        let index = index.ok_or(ReasonerError::MissingIndex)?;
        let hits = index.search_topk(&HashedBagOfWords, &retrieval_query(params), opts.top_k)?;
        hits.into_iter()
            .map(|h| ContextChunk {
                doc_id: h.chunk.doc_id,
                seq: h.chunk.seq,
                text: h.chunk.text,
            })
            .collect()
    } else {
        Vec::new()
    };

    let endpoint = endpoint.ok_or(ReasonerError::MissingEndpoint)?;
    let prompt = assemble_prompt(params, &chunks, opts.with_rag);
    match endpoint.complete(&prompt.system_text, &prompt.user_text()).await {
        Ok(raw) => {
            let mut verdict = parse_verdict(&raw);
            verdict.mode = if opts.with_rag {
                VerdictMode::LlmRag
            } else {
                VerdictMode::LlmOnly
            };
            if opts.with_rag {
                let mut sources: Vec<String> =
                    chunks.iter().map(|c| c.doc_id.clone()).collect();
                sources.dedup();
                verdict.sources = sources;
            }
            Ok(verdict)
        }
        Err(e) if opts.rule_fallback => {
            let mut verdict = rule_based_classify(params, rules);
            verdict.rationale = format!("endpoint failed ({e}); rule-based fallback: {}", verdict.rationale);
            Ok(verdict)
        }
        Err(e) => Err(e),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::endpoint::EndpointConfig;
    use crate::verdict::CanonicalClass;
    use radmat_core::dsp::TargetDetection;
    use radmat_rag::{Embedder, HashedBagOfWords};

    fn params(eps: f64, gamma: f64) -> EmParameters {
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
            metal_like: false,
        }
    }

    fn sample_index() -> KnowledgeIndex {
        let docs = vec![
            (
                "dielectrics.md".to_string(),
                "Relative permittivity of common household materials: plastics sit \
                 near two to three, glass near four to five, ceramics above five."
                    .to_string(),
            ),
            (
                "reflection.md".to_string(),
                "Metals reflect nearly all incident millimetre-wave power; their \
                 reflection coefficient approaches one."
                    .to_string(),
            ),
        ];
        KnowledgeIndex::build(&docs, &HashedBagOfWords, 256, 32).unwrap()
    }

    #[tokio::test]
    async fn rule_mode_needs_no_index_or_endpoint() {
        let opts = IdentifyOptions {
            use_llm: false,
            ..IdentifyOptions::default()
        };
        let v = identify(&params(4.0, 1.0 / 3.0), None, None, &RuleTable::default(), &opts)
            .await
            .unwrap();
        assert_eq!(v.canonical_class, CanonicalClass::Glass);
        assert_eq!(v.mode, VerdictMode::RuleBased);
        assert!(v.sources.is_empty());
    }

    #[tokio::test]
    async fn stub_llm_with_rag_records_mode_and_sources() {
        let endpoint = ChatEndpoint::from_config(EndpointConfig {
            base_url: "stub:".into(),
            ..EndpointConfig::default()
        })
        .unwrap();
        let index = sample_index();
        let v = identify(
            &params(6.5, 0.44),
            Some(&index),
            Some(&endpoint),
            &RuleTable::default(),
            &IdentifyOptions::default(),
        )
        .await
        .unwrap();
        assert_eq!(v.canonical_class, CanonicalClass::Ceramic);
        assert_eq!(v.mode, VerdictMode::LlmRag);
        assert!(!v.sources.is_empty());
    }

    #[tokio::test]
    async fn no_rag_arm_has_no_sources_and_llm_only_mode() {
        let endpoint = ChatEndpoint::from_config(EndpointConfig {
            base_url: "stub:".into(),
            ..EndpointConfig::default()
        })
        .unwrap();
        let opts = IdentifyOptions {
            with_rag: false,
            ..IdentifyOptions::default()
        };
        let v = identify(
            &params(2.5, 0.23),
            None,
            Some(&endpoint),
            &RuleTable::default(),
            &opts,
        )
        .await
        .unwrap();
        assert_eq!(v.mode, VerdictMode::LlmOnly);
        assert!(v.sources.is_empty());
        assert_eq!(v.canonical_class, CanonicalClass::Plastic);
    }

    #[tokio::test]
    async fn missing_index_and_endpoint_are_reported() {
        let e = identify(
            &params(4.0, 0.33),
            None,
            None,
            &RuleTable::default(),
            &IdentifyOptions::default(),
        )
        .await;
        assert!(matches!(e, Err(ReasonerError::MissingIndex)));

        let index = sample_index();
        let e = identify(
            &params(4.0, 0.33),
            Some(&index),
            None,
            &RuleTable::default(),
            &IdentifyOptions::default(),
        )
        .await;
        assert!(matches!(e, Err(ReasonerError::MissingEndpoint)));
    }

    #[tokio::test]
    async fn retrieval_query_names_the_four_features() {
        let q = retrieval_query(&params(4.0, 0.33));
        for key in ["rcs_m2", "rho", "gamma_f", "epsilon_r"] {
            assert!(q.contains(key), "query missing {key}: {q}");
        }
        // and it embeds cleanly
        assert!(HashedBagOfWords.embed(&q).is_ok());
    }

    #[tokio::test]
    async fn identify_is_deterministic_with_the_stub() {
        let endpoint = ChatEndpoint::from_config(EndpointConfig {
            base_url: "stub:".into(),
            ..EndpointConfig::default()
        })
        .unwrap();
        let index = sample_index();
        let run = || async {
            identify(
                &params(7.5, 0.47),
                Some(&index),
                Some(&endpoint),
                &RuleTable::default(),
                &IdentifyOptions::default(),
            )
            .await
            .unwrap()
        };
        assert_eq!(run().await, run().await);
    }
}
