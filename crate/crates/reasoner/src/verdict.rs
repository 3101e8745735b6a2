//! Verdict types and response parsing.

use serde::{Deserialize, Serialize};

/// Scoring classes. The free-text label stays open-set; this is only the
/// canonical bucket used for accuracy accounting.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CanonicalClass {
    Metal,
    Ceramic,
    Glass,
    Plastic,
    Other,
    Unknown,
}

impl std::fmt::Display for CanonicalClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            CanonicalClass::Metal => "metal",
            CanonicalClass::Ceramic => "ceramic",
            CanonicalClass::Glass => "glass",
            CanonicalClass::Plastic => "plastic",
            CanonicalClass::Other => "other",
            CanonicalClass::Unknown => "unknown",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for CanonicalClass {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "metal" => Ok(CanonicalClass::Metal),
            "ceramic" => Ok(CanonicalClass::Ceramic),
            "glass" => Ok(CanonicalClass::Glass),
            "plastic" => Ok(CanonicalClass::Plastic),
            "other" => Ok(CanonicalClass::Other),
            "unknown" => Ok(CanonicalClass::Unknown),
            other => Err(format!("unknown material class `{other}`")),
        }
    }
}

/// How a verdict was produced.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum VerdictMode {
    #[serde(rename = "llm+rag")]
    LlmRag,
    #[serde(rename = "llm-only")]
    LlmOnly,
    #[serde(rename = "rule-based")]
    RuleBased,
}

impl std::fmt::Display for VerdictMode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            VerdictMode::LlmRag => "llm+rag",
            VerdictMode::LlmOnly => "llm-only",
            VerdictMode::RuleBased => "rule-based",
        };
        f.write_str(s)
    }
}

impl std::str::FromStr for VerdictMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "llm+rag" => Ok(VerdictMode::LlmRag),
            "llm-only" => Ok(VerdictMode::LlmOnly),
            "rule-based" => Ok(VerdictMode::RuleBased),
            other => Err(format!("unknown verdict mode `{other}`")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaterialVerdict {
    /// Free-text material label (open set), e.g. "stainless steel".
    pub label: String,
    pub canonical_class: CanonicalClass,
    pub rationale: String,
    /// Document ids of the retrieved context; empty unless mode is llm+rag.
    pub sources: Vec<String>,
    pub mode: VerdictMode,
}

/// Case-insensitive synonym table, longest entries first so that, say,
/// "glass-ceramic" resolves before "glass".
const SYNONYMS: &[(&str, CanonicalClass)] = &[
    ("glass-ceramic", CanonicalClass::Ceramic),
    ("stainless steel", CanonicalClass::Metal),
    ("polycarbonate", CanonicalClass::Plastic),
    ("polypropylene", CanonicalClass::Plastic),
    ("polyethylene", CanonicalClass::Plastic),
    ("borosilicate", CanonicalClass::Glass),
    ("earthenware", CanonicalClass::Ceramic),
    ("aluminium", CanonicalClass::Metal),
    ("stoneware", CanonicalClass::Ceramic),
    ("porcelain", CanonicalClass::Ceramic),
    ("aluminum", CanonicalClass::Metal),
    ("acrylic", CanonicalClass::Plastic),
    ("ceramic", CanonicalClass::Ceramic),
    ("plastic", CanonicalClass::Plastic),
    ("polymer", CanonicalClass::Plastic),
    ("copper", CanonicalClass::Metal),
    ("silver", CanonicalClass::Metal),
    ("teflon", CanonicalClass::Plastic),
    ("brass", CanonicalClass::Metal),
    ("china", CanonicalClass::Ceramic),
    ("glass", CanonicalClass::Glass),
    ("metal", CanonicalClass::Metal),
    ("nylon", CanonicalClass::Plastic),
    ("pyrex", CanonicalClass::Glass),
    ("steel", CanonicalClass::Metal),
    ("gold", CanonicalClass::Metal),
    ("hdpe", CanonicalClass::Plastic),
    ("iron", CanonicalClass::Metal),
    ("abs", CanonicalClass::Plastic),
    ("pet", CanonicalClass::Plastic),
    ("pvc", CanonicalClass::Plastic),
    ("tin", CanonicalClass::Metal),
];

fn class_for_label(label: &str) -> CanonicalClass {
    let lower = label.to_lowercase();
    for (syn, class) in SYNONYMS {
        if lower.contains(syn) {
            return *class;
        }
    }
    CanonicalClass::Other
}

fn strip_decoration(line: &str) -> &str {
    line.trim()
        .trim_start_matches(['#', '*', '>', '-', ' ', '\t'])
        .trim_end_matches(['*', '`', '_', ' ', '\t'])
}

/// Extract a verdict from raw model output. Looks for the last line of the
/// form `MATERIAL: <label>`; without one, falls back to material keywords in
/// the final paragraph; still ambiguous means class `unknown`. Never fails:
/// unknown is a value, not an error.
pub fn parse_verdict(raw: &str) -> MaterialVerdict {
    // marker path: the last MATERIAL: line wins
    for line in raw.lines().rev() {
        let line = strip_decoration(line);
        let lower = line.to_ascii_lowercase();
        if let Some(rest) = lower.strip_prefix("material:") {
            if rest.trim().is_empty() {
                continue;
            }
            // take the label from the original casing
            let label = strip_decoration(&line[line.len() - rest.len()..])
                .trim_end_matches('.')
                .trim()
                .to_string();
            return MaterialVerdict {
                canonical_class: class_for_label(&label),
                label,
                rationale: raw.to_string(),
                sources: Vec::new(),
                mode: VerdictMode::LlmOnly,
            };
        }
    }

    // keyword fallback over the final paragraph
    let final_paragraph = raw
        .rsplit("\n\n")
        .find(|p| !p.trim().is_empty())
        .unwrap_or("");
    let lower = final_paragraph.to_lowercase();
    let mut found: Option<(&str, CanonicalClass)> = None;
    let mut ambiguous = false;
    for (syn, class) in SYNONYMS {
        if lower.contains(syn) {
            match found {
                None => found = Some((syn, *class)),
                Some((_, prev)) if prev != *class => ambiguous = true,
                _ => {}
            }
        }
    }
    match (found, ambiguous) {
        (Some((syn, class)), false) => MaterialVerdict {
            label: syn.to_string(),
            canonical_class: class,
            rationale: raw.to_string(),
            sources: Vec::new(),
            mode: VerdictMode::LlmOnly,
        },
        _ => MaterialVerdict {
            label: String::new(),
            canonical_class: CanonicalClass::Unknown,
            rationale: raw.to_string(),
            sources: Vec::new(),
            mode: VerdictMode::LlmOnly,
        },
    }
}

/// Structured text record: label, canonical_class, mode, sources, rationale.
/// Newlines in the rationale are escaped so the record stays line-oriented.
pub fn verdict_to_record(v: &MaterialVerdict) -> String {
    format!(
        "label = {}\ncanonical_class = {}\nmode = {}\nsources = {}\nrationale = {}\n",
        v.label,
        v.canonical_class,
        v.mode,
        v.sources.join(", "),
        v.rationale.replace('\\', "\\\\").replace('\n', "\\n"),
    )
}

pub fn verdict_from_record(text: &str) -> Result<MaterialVerdict, String> {
    let mut label = None;
    let mut class = None;
    let mut mode = None;
    let mut sources = Vec::new();
    let mut rationale = String::new();
    for line in text.lines() {
        let Some((k, v)) = line.split_once('=') else {
            continue;
        };
        let (k, v) = (k.trim(), v.trim());
        match k {
            "label" => label = Some(v.to_string()),
            "canonical_class" => class = Some(v.parse::<CanonicalClass>()?),
            "mode" => mode = Some(v.parse::<VerdictMode>()?),
            "sources" => {
                sources = v
                    .split(',')
                    .map(|s| s.trim().to_string())
                    .filter(|s| !s.is_empty())
                    .collect()
            }
            "rationale" => {
                rationale = v.replace("\\n", "\n").replace("\\\\", "\\");
            }
            _ => {}
        }
    }
    Ok(MaterialVerdict {
        label: label.ok_or("missing label")?,
        canonical_class: class.ok_or("missing canonical_class")?,
        rationale,
        sources,
        mode: mode.ok_or("missing mode")?,
    })
}
