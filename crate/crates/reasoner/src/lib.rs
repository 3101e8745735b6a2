//! Material inference from the eight-parameter radar signature: prompt
//! assembly, chat-completion endpoint client, response parsing, and a
//! deterministic rule-based classifier that doubles as the offline fallback
//! and the ablation baseline.

mod endpoint;
mod error;
mod identify;
mod prompt;
mod rules;
mod verdict;

pub use endpoint::{stub_completion, ChatEndpoint, EndpointConfig, HttpChat, StubChat};
pub use error::ReasonerError;
pub use identify::{identify, retrieval_query, IdentifyOptions};
pub use prompt::{assemble_prompt, ContextChunk, Prompt};
pub use rules::{rule_based_classify, RuleTable};
pub use verdict::{
    parse_verdict, verdict_from_record, verdict_to_record, CanonicalClass, MaterialVerdict,
    VerdictMode,
};
