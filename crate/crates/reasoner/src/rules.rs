//! Deterministic rule-based classifier.
//!
//! A decision list over the reflection coefficient and relative
//! permittivity, evaluated top-down. The thresholds track commonly tabulated
//! dielectric ranges for household materials and are overridable from a
//! config file; they are a fixture for offline runs and ablation baselines,
//! not a physical claim.

use std::path::Path;

use radmat_core::em::EmParameters;
use radmat_core::kv;

use crate::verdict::{CanonicalClass, MaterialVerdict, VerdictMode};

#[derive(Debug, Clone, PartialEq)]
pub struct RuleTable {
    /// gamma_f at or above this (or a clamp flag) is metal.
    pub metal_gamma_min: f64,
    /// Combined eps/gamma band checked first: eps in this half-open range...
    pub fused_eps: (f64, f64),
    /// ...with gamma in this half-open range.
    pub fused_gamma: (f64, f64),
    /// eps half-open range mapped to glass or ceramic...
    pub glass_ceramic_eps: (f64, f64),
    /// ...split at this value: below glass, at or above ceramic.
    pub glass_ceramic_split: f64,
    /// eps half-open range mapped to plastic.
    pub plastic_eps: (f64, f64),
}

impl Default for RuleTable {
    fn default() -> Self {
        RuleTable {
            metal_gamma_min: 0.95,
            fused_eps: (4.0, 9.0),
            fused_gamma: (0.3, 0.6),
            glass_ceramic_eps: (3.5, 9.0),
            glass_ceramic_split: 5.5,
            plastic_eps: (1.8, 3.5),
        }
    }
}

impl RuleTable {
    pub fn from_text(text: &str) -> Result<Self, String> {
        let block = kv::parse_flat(text).map_err(|e| e.to_string())?;
        let mut table = RuleTable::default();
        let get = |key: &str, current: f64| -> Result<f64, String> {
            match block.get(key) {
                Some(raw) => raw
                    .parse::<f64>()
                    .map_err(|_| format!("rule key `{key}`: bad number `{raw}`")),
                None => Ok(current),
            }
        };
        table.metal_gamma_min = get("metal_gamma_min", table.metal_gamma_min)?;
        table.fused_eps.0 = get("fused_eps_min", table.fused_eps.0)?;
        table.fused_eps.1 = get("fused_eps_max", table.fused_eps.1)?;
        table.fused_gamma.0 = get("fused_gamma_min", table.fused_gamma.0)?;
        table.fused_gamma.1 = get("fused_gamma_max", table.fused_gamma.1)?;
        table.glass_ceramic_eps.0 = get("glass_ceramic_eps_min", table.glass_ceramic_eps.0)?;
        table.glass_ceramic_eps.1 = get("glass_ceramic_eps_max", table.glass_ceramic_eps.1)?;
        table.glass_ceramic_split = get("glass_ceramic_split", table.glass_ceramic_split)?;
        table.plastic_eps.0 = get("plastic_eps_min", table.plastic_eps.0)?;
        table.plastic_eps.1 = get("plastic_eps_max", table.plastic_eps.1)?;
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path).map_err(|e| e.to_string())?;
        Self::from_text(&text)
    }
}

fn in_band(x: f64, band: (f64, f64)) -> bool {
    x >= band.0 && x < band.1
}

/// Classify a parameter record with the decision list. Total over all
/// inputs with epsilon_r >= 1: every record maps to exactly one class.
pub fn rule_based_classify(params: &EmParameters, rules: &RuleTable) -> MaterialVerdict {
    let eps = params.epsilon_r;
    let gamma = params.gamma_f;

    let (class, why) = if params.metal_like || gamma >= rules.metal_gamma_min {
        (
            CanonicalClass::Metal,
            format!(
                "reflection coefficient {gamma:.3} at the conductor ceiling (threshold {})",
                rules.metal_gamma_min
            ),
        )
    } else if in_band(eps, rules.fused_eps) && in_band(gamma, rules.fused_gamma) {
        if eps >= rules.glass_ceramic_split {
            (
                CanonicalClass::Ceramic,
                format!(
                    "eps {eps:.2} and gamma {gamma:.3} in the dense-dielectric band, above the {} split",
                    rules.glass_ceramic_split
                ),
            )
        } else {
            (
                CanonicalClass::Glass,
                format!(
                    "eps {eps:.2} and gamma {gamma:.3} in the dense-dielectric band, below the {} split",
                    rules.glass_ceramic_split
                ),
            )
        }
    } else if in_band(eps, rules.glass_ceramic_eps) {
        if eps >= rules.glass_ceramic_split {
            (
                CanonicalClass::Ceramic,
                format!("eps {eps:.2} above the glass/ceramic split {}", rules.glass_ceramic_split),
            )
        } else {
            (
                CanonicalClass::Glass,
                format!("eps {eps:.2} below the glass/ceramic split {}", rules.glass_ceramic_split),
            )
        }
    } else if in_band(eps, rules.plastic_eps) {
        (
            CanonicalClass::Plastic,
            format!("eps {eps:.2} in the low-permittivity polymer band"),
        )
    } else {
        (
            CanonicalClass::Other,
            format!("eps {eps:.2}, gamma {gamma:.3} outside every material band"),
        )
    };

    MaterialVerdict {
        label: class.to_string(),
        canonical_class: class,
        rationale: why,
        sources: Vec::new(),
        mode: VerdictMode::RuleBased,
    }
}
