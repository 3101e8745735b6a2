//! External text record for the eight-parameter signature.
//!
//! One `key = value` block per record, blank-line separated. Field names are
//! fixed: range_m, velocity_mps, angle_deg, snr_db, rcs_m2, rho, gamma_f,
//! epsilon_r, metal_like_flag. Angles are degrees and SNR is dB here (the
//! I/O boundary); everything internal stays radians/linear.

use super::EmParameters;
use crate::dsp::TargetDetection;
use crate::error::CoreError;
use crate::kv::{self, Block};
use crate::units::{db_from_linear, linear_from_db};

pub fn em_record_to_string(em: &EmParameters) -> String {
    let snr_db = if em.detection.snr_linear.is_infinite() {
        f64::INFINITY
    } else {
        db_from_linear(em.detection.snr_linear).unwrap_or(f64::NEG_INFINITY)
    };
    let mut out = String::new();
    out.push_str(&format!("range_m = {}\n", kv::fmt_f64(em.detection.range)));
    out.push_str(&format!(
        "velocity_mps = {}\n",
        kv::fmt_f64(em.detection.velocity)
    ));
    out.push_str(&format!(
        "angle_deg = {}\n",
        kv::fmt_f64(em.detection.angle.to_degrees())
    ));
    out.push_str(&format!("snr_db = {}\n", kv::fmt_f64(snr_db)));
    out.push_str(&format!("rcs_m2 = {}\n", kv::fmt_f64(em.rcs)));
    out.push_str(&format!("rho = {}\n", kv::fmt_f64(em.rho)));
    out.push_str(&format!("gamma_f = {}\n", kv::fmt_f64(em.gamma_f)));
    out.push_str(&format!("epsilon_r = {}\n", kv::fmt_f64(em.epsilon_r)));
    out.push_str(&format!("metal_like_flag = {}\n", em.metal_like));
    out
}

pub fn em_records_to_string(records: &[EmParameters]) -> String {
    records
        .iter()
        .map(em_record_to_string)
        .collect::<Vec<_>>()
        .join("\n")
}

fn em_from_block(block: &Block) -> Result<EmParameters, CoreError> {
    let detection = TargetDetection {
        range: block.require_f64("range_m")?,
        velocity: block.require_f64("velocity_mps")?,
        angle: block.require_f64("angle_deg")?.to_radians(),
        snr_linear: {
            let db = block.require_f64("snr_db")?;
            if db.is_infinite() && db > 0.0 {
                f64::INFINITY
            } else {
                linear_from_db(db)
            }
        },
        // bin indices are internal detail, not part of the record
        peak_bin: (0, 0, 0),
    };
    Ok(EmParameters {
        detection,
        rcs: block.require_f64("rcs_m2")?,
        rho: block.require_f64("rho")?,
        gamma_f: block.require_f64("gamma_f")?,
        epsilon_r: block.require_f64("epsilon_r")?,
        metal_like: block.require_bool("metal_like_flag")?,
    })
}

pub fn em_record_from_str(text: &str) -> Result<EmParameters, CoreError> {
    let records = em_records_from_str(text)?;
    records
        .into_iter()
        .next()
        .ok_or_else(|| CoreError::Parse("no parameter record found".into()))
}

pub fn em_records_from_str(text: &str) -> Result<Vec<EmParameters>, CoreError> {
    kv::parse_blocks(text)?
        .iter()
        .map(em_from_block)
        .collect()
}

/// JSON (de)serialization for the permittivity field: an infinite value
/// (metal-like) is carried as the string "inf" since JSON has no infinity.
pub mod serde_epsilon {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_infinite() {
            s.serialize_str(if *v > 0.0 { "inf" } else { "-inf" })
        } else {
            s.serialize_f64(*v)
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum NumOrStr {
            Num(f64),
            Str(String),
        }
        match NumOrStr::deserialize(d)? {
            NumOrStr::Num(v) => Ok(v),
            NumOrStr::Str(s) => s
                .parse::<f64>()
                .map_err(|_| de::Error::custom(format!("bad epsilon_r value `{s}`"))),
        }
    }
}
