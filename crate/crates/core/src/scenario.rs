//! Scenario file parsing.
//!
//! A simulation scenario is a text file of `[target]` blocks (plus an
//! optional `[noise]` block):
//!
//! ```text
//! [target]
//! label = metal sphere d=63mm
//! range_m = 1.0
//! velocity_mps = 0.0
//! angle_deg = 0.0
//! rcs_m2 = 0.003117
//!
//! [noise]
//! power = 4.0e-14        # optional; defaults to the config's thermal level
//! ```

use std::path::Path;

use crate::error::CoreError;
use crate::kv;
use crate::sim::SimTarget;

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub targets: Vec<SimTarget>,
    /// Override for the per-sample noise power; None means thermal k*Tn*B.
    pub noise_power: Option<f64>,
}

pub fn parse_scenario(text: &str) -> Result<Scenario, CoreError> {
    let mut targets = Vec::new();
    let mut noise_power = None;
    for block in kv::parse_blocks(text)? {
        match block.section.as_deref() {
            Some("target") => targets.push(SimTarget {
                label: block.get("label").unwrap_or("target").to_string(),
                range: block.require_f64("range_m")?,
                velocity: block.get_f64("velocity_mps")?.unwrap_or(0.0),
                angle: block.get_f64("angle_deg")?.unwrap_or(0.0).to_radians(),
                rcs: block.require_f64("rcs_m2")?,
            }),
            Some("noise") => noise_power = Some(block.require_f64("power")?),
            Some(other) => {
                return Err(CoreError::Parse(format!(
                    "unknown scenario section [{other}]"
                )))
            }
            None => {
                return Err(CoreError::Parse(
                    "scenario entries must live under a [target] or [noise] section".into(),
                ))
            }
        }
    }
    Ok(Scenario {
        targets,
        noise_power,
    })
}

pub fn load_scenario(path: &Path) -> Result<Scenario, CoreError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CoreError::Parse(format!("cannot read scenario {}: {e}", path.display())))?;
    parse_scenario(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_targets_and_noise() {
        let text = "\
[target]
label = glass tumbler
range_m = 1.2
velocity_mps = 0.5
angle_deg = 10
rcs_m2 = 0.0009

[target]
range_m = 2.0
rcs_m2 = 0.01

[noise]
power = 1e-13
";
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.targets.len(), 2);
        assert_eq!(s.targets[0].label, "glass tumbler");
        assert!((s.targets[0].angle - 10f64.to_radians()).abs() < 1e-12);
        assert_eq!(s.targets[1].label, "target");
        assert_eq!(s.targets[1].velocity, 0.0);
        assert_eq!(s.noise_power, Some(1e-13));
    }

    #[test]
    fn rejects_missing_required_fields_by_name() {
        let err = parse_scenario("[target]\nlabel = x\nvelocity_mps = 1\nrcs_m2 = 0.1\n").unwrap_err();
        assert!(err.to_string().contains("range_m"), "{err}");
        let err = parse_scenario("[target]\nrange_m = 1\n").unwrap_err();
        assert!(err.to_string().contains("rcs_m2"), "{err}");
    }

    #[test]
    fn rejects_unknown_sections() {
        assert!(parse_scenario("[object]\nx = 1\n").is_err());
    }
}
