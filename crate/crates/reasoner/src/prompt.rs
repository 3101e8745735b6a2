//! Prompt assembly.
//!
//! The prompt carries (1) retrieved reference excerpts with source
//! attribution, (2) the eight-field parameter record verbatim, and (3) an
//! instruction demanding step-by-step reasoning over each parameter and a
//! machine-parseable final line. Assembly is byte-deterministic.

use radmat_core::em::{em_record_to_string, EmParameters};

/// A retrieved excerpt with its attribution.
#[derive(Debug, Clone, PartialEq)]
pub struct ContextChunk {
    pub doc_id: String,
    pub seq: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Prompt {
    pub system_text: String,
    pub context_chunks: Vec<ContextChunk>,
    /// The eight-parameter record, exactly as serialized externally.
    pub parameter_block: String,
    pub instruction_text: String,
}

const SYSTEM_TEXT: &str = "You are a materials analyst working with a millimetre-wave radar. \
You infer what material an object is made of from its measured radar parameters: \
range, velocity, angle, SNR, radar cross section (rcs_m2), per-area power reflectivity (rho), \
Fresnel reflection coefficient (gamma_f), and relative permittivity (epsilon_r).";

const INSTRUCTION_TEXT: &str = "Reason step by step through each parameter: \
what the SNR and radar cross section say about the reflector, what the reflectivity and \
reflection coefficient imply about the surface, and which materials match the relative \
permittivity. Weigh conflicting evidence (for example a high permittivity with a low radar \
cross section may indicate an absorber). Then answer with your best single material. \
The very last line of your reply must have exactly this form:\nMATERIAL: <material name>";

/// Build the prompt. Context chunks are included, in retrieval order, only
/// when `with_rag` is set.
pub fn assemble_prompt(params: &EmParameters, chunks: &[ContextChunk], with_rag: bool) -> Prompt {
    Prompt {
        system_text: SYSTEM_TEXT.to_string(),
        context_chunks: if with_rag { chunks.to_vec() } else { Vec::new() },
        parameter_block: em_record_to_string(params),
        instruction_text: INSTRUCTION_TEXT.to_string(),
    }
}

impl Prompt {
    /// The user-role message: attributed context, the parameter block, and
    /// the instruction.
    pub fn user_text(&self) -> String {
        let mut out = String::new();
        if !self.context_chunks.is_empty() {
            out.push_str("Reference excerpts from the knowledge base:\n\n");
            for c in &self.context_chunks {
                out.push_str(&format!("[{}#{}]\n{}\n\n", c.doc_id, c.seq, c.text));
            }
        }
        out.push_str("Measured radar parameters:\n");
        out.push_str(&self.parameter_block);
        out.push('\n');
        out.push_str(&self.instruction_text);
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use radmat_core::dsp::TargetDetection;

    fn params() -> EmParameters {
        EmParameters {
            detection: TargetDetection {
                range: 1.2,
                velocity: 0.0,
                angle: 0.0,
                snr_linear: 1000.0,
                peak_bin: (0, 0, 0),
            },
            rcs: 0.0009,
            rho: 0.111,
            gamma_f: 1.0 / 3.0,
            epsilon_r: 4.0,
            metal_like: false,
        }
    }

    fn chunks() -> Vec<ContextChunk> {
        (0..3)
            .map(|i| ContextChunk {
                doc_id: format!("doc{i}.md"),
                seq: i,
                text: format!("excerpt number {i}"),
            })
            .collect()
    }

    #[test]
    fn deterministic_assembly() {
        let a = assemble_prompt(&params(), &chunks(), true);
        let b = assemble_prompt(&params(), &chunks(), true);
        assert_eq!(a, b);
        assert_eq!(a.user_text(), b.user_text());
    }

    #[test]
    fn ablation_arm_has_no_context() {
        let p = assemble_prompt(&params(), &chunks(), false);
        assert!(p.context_chunks.is_empty());
        assert!(!p.user_text().contains("Reference excerpts"));
        // all eight parameter fields are present
        for key in [
            "range_m", "velocity_mps", "angle_deg", "snr_db", "rcs_m2", "rho", "gamma_f",
            "epsilon_r",
        ] {
            assert!(p.parameter_block.contains(key), "missing {key}");
        }
    }

    #[test]
    fn context_appears_attributed_and_in_order() {
        let p = assemble_prompt(&params(), &chunks(), true);
        let text = p.user_text();
        let i0 = text.find("[doc0.md#0]").unwrap();
        let i1 = text.find("[doc1.md#1]").unwrap();
        let i2 = text.find("[doc2.md#2]").unwrap();
        assert!(i0 < i1 && i1 < i2);
        assert_eq!(p.context_chunks.len(), 3);
    }

    #[test]
    fn final_line_contract_is_stated() {
        let p = assemble_prompt(&params(), &[], false);
        assert!(p.user_text().contains("MATERIAL: <material name>"));
    }
}
