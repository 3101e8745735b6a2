//! The evaluation harness: run a simulated object suite end-to-end under
//! each requested mode and score the verdicts.
//!
//! Per object, the simulated cross-section is derived from the declared
//! material: rho = gamma^2 from the reflection relation at the object's
//! incidence angle (or a value above the clamp ceiling for a perfect
//! reflector), scaled by the peak reflection cell area at its range. The
//! processing chain then has to recover the signature and the reasoner has
//! to name the material.

use radmat_api as api;
use radmat_core::dsp::TargetDetection;
use radmat_core::em::{fresnel_forward, prca_area};
use radmat_core::pipeline::{calibrate_from_cube, extract_em_parameters};
use radmat_core::sim::{synthesize_cube, NoiseSpec, SimTarget};
use radmat_core::RadarConfig;
use radmat_rag::KnowledgeIndex;
use radmat_reasoner::{ChatEndpoint, IdentifyOptions, RuleTable};

use crate::error::ApiError;

/// Reflectivity injected for perfect reflectors; anything above the clamp
/// ceiling of 1 flags metal-like deterministically even under noise.
const PERFECT_REFLECTOR_RHO: f64 = 1.5;

fn object_target(config: &RadarConfig, obj: &api::ReportObject) -> Result<SimTarget, ApiError> {
    let theta = obj.angle_deg.to_radians();
    let probe = TargetDetection {
        range: obj.range_m,
        velocity: 0.0,
        angle: theta,
        snr_linear: 1.0,
        peak_bin: (0, 0, 0),
    };
    let cell = prca_area(&probe, config)?;
    let rho = if obj.perfect_reflector {
        PERFECT_REFLECTOR_RHO
    } else {
        let eps = obj.epsilon_r.ok_or_else(|| {
            ApiError::bad_request(
                "bad-object",
                format!("object `{}` needs epsilon_r or perfect_reflector", obj.label),
            )
        })?;
        let gamma = fresnel_forward(eps, theta)?;
        gamma * gamma
    };
    Ok(SimTarget {
        range: obj.range_m,
        velocity: obj.velocity_mps,
        angle: theta,
        rcs: rho * cell.area,
        label: obj.label.clone(),
    })
}

pub async fn run_report(req: api::ReportRequest) -> Result<api::ReportResponse, ApiError> {
    if req.objects.is_empty() {
        return Err(ApiError::bad_request("empty-input", "no objects in the suite"));
    }
    if req.modes.is_empty() {
        return Err(ApiError::bad_request("empty-input", "no modes requested"));
    }

    // Simulation and processing are CPU-bound; run them off the async core.
    let config = req.config.clone();
    let objects = req.objects.clone();
    let seed = req.seed;
    let sphere_d = req.sphere_diameter_m;
    let (calibration, per_object) = tokio::task::spawn_blocking(
        move || -> Result<(api::Calibration, Vec<api::EmParameters>), ApiError> {
            config.validate()?;
            // reference sphere pass
            let lambda = config.wavelength()?;
            let sphere = radmat_core::sim::sphere_rcs(sphere_d, lambda)?;
            let sphere_target = SimTarget {
                range: 1.0,
                velocity: 0.0,
                angle: 0.0,
                rcs: sphere.area,
                label: format!("reference sphere d = {sphere_d} m"),
            };
            let cal_cube = synthesize_cube(
                &config,
                &[sphere_target],
                &NoiseSpec::thermal(&config, seed),
            )?;
            let cal = calibrate_from_cube(&cal_cube, sphere_d)?;

            let mut per_object = Vec::with_capacity(objects.len());
            for (i, obj) in objects.iter().enumerate() {
                let target = object_target(&config, obj)?;
                let cube = synthesize_cube(
                    &config,
                    &[target],
                    &NoiseSpec::thermal(&config, seed + 1 + i as u64),
                )?;
                let records = extract_em_parameters(&cube, &cal)?;
                per_object.push(records.into_iter().next().expect("non-empty records"));
            }
            Ok((cal, per_object))
        },
    )
    .await
    .map_err(|e| ApiError::internal(format!("worker panicked: {e}")))??;

    let index = match &req.index_b64 {
        Some(b64) => {
            let bytes =
                api::b64::decode(b64).map_err(|e| ApiError::bad_request("malformed-index", e))?;
            Some(KnowledgeIndex::from_bytes(&bytes).map_err(ApiError::from)?)
        }
        None => None,
    };
    let endpoint = match req.endpoint.clone() {
        Some(spec) => Some(ChatEndpoint::from_config(spec.into()).map_err(ApiError::from)?),
        None => None,
    };
    let rules = RuleTable::default();

    let mut rows = Vec::with_capacity(req.modes.len() * req.objects.len());
    let mut summaries = Vec::with_capacity(req.modes.len());
    for mode in &req.modes {
        let opts = match mode {
            api::ReportMode::Rule => IdentifyOptions {
                with_rag: false,
                use_llm: false,
                top_k: req.top_k,
                rule_fallback: false,
            },
            api::ReportMode::LlmNoRag => IdentifyOptions {
                with_rag: false,
                use_llm: true,
                top_k: req.top_k,
                rule_fallback: false,
            },
            api::ReportMode::LlmRag => IdentifyOptions {
                with_rag: true,
                use_llm: true,
                top_k: req.top_k,
                rule_fallback: false,
            },
        };
        let mut correct = 0usize;
        for (obj, params) in req.objects.iter().zip(per_object.iter()) {
            let verdict = radmat_reasoner::identify(
                params,
                index.as_ref(),
                endpoint.as_ref(),
                &rules,
                &opts,
            )
            .await
            .map_err(ApiError::from)?;
            let is_correct = verdict.canonical_class == obj.material;
            if is_correct {
                correct += 1;
            }
            rows.push(api::ReportRow {
                label: obj.label.clone(),
                true_material: obj.material,
                mode: *mode,
                params: params.clone(),
                verdict,
                correct: is_correct,
            });
        }
        summaries.push(api::ModeSummary {
            mode: *mode,
            correct,
            total: req.objects.len(),
            accuracy: correct as f64 / req.objects.len() as f64,
        });
    }

    Ok(api::ReportResponse {
        rows,
        summaries,
        calibration,
    })
}
