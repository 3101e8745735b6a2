//! End-to-end HTTP tests: a real listener, the real client, every route.

use radmat_api as api;
use radmat_client::{Client, ClientError};
use radmat_core::capture::read_capture;
use radmat_core::config::RadarConfig;
use radmat_core::em::prca_area;
use radmat_core::sim::sphere_rcs;

async fn spawn_service() -> Client {
    let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
    let addr = listener.local_addr().unwrap();
    tokio::spawn(async move {
        radmat_service::serve(listener).await.unwrap();
    });
    Client::new(format!("http://{addr}")).unwrap()
}

fn small_config() -> RadarConfig {
    let mut cfg = RadarConfig::default();
    cfg.n_channels = 4;
    cfg.n_chirps = 32;
    cfg.n_samples = 128;
    cfg.bandwidth = cfg.slope * cfg.n_samples as f64 / cfg.fs;
    cfg
}

fn sim_request(cfg: &RadarConfig, targets: Vec<api::SimTarget>, seed: u64) -> api::SimulateRequest {
    api::SimulateRequest {
        config: cfg.clone(),
        targets,
        noise_power: None,
        seed,
    }
}

fn sphere_target(cfg: &RadarConfig) -> api::SimTarget {
    api::SimTarget {
        range: 1.0,
        velocity: 0.0,
        angle: 0.0,
        rcs: sphere_rcs(0.063, cfg.wavelength().unwrap()).unwrap().area,
        label: "sphere".into(),
    }
}

#[tokio::test]
async fn health_reports_ok() {
    let client = spawn_service().await;
    let health = client.health().await.unwrap();
    assert_eq!(health.status, "ok");
}

#[tokio::test]
async fn simulate_returns_a_parseable_deterministic_capture() {
    let client = spawn_service().await;
    let cfg = small_config();
    let req = sim_request(&cfg, vec![sphere_target(&cfg)], 5);
    let a = client.simulate(&req).await.unwrap();
    let b = client.simulate(&req).await.unwrap();
    assert_eq!(a, b, "same seed must give byte-identical captures");
    let cube = read_capture(&a).unwrap();
    assert_eq!(cube.config(), &cfg);
}

#[tokio::test]
async fn calibrate_then_process_recovers_the_sphere() {
    let client = spawn_service().await;
    let cfg = RadarConfig::default();
    let capture = client
        .simulate(&sim_request(&cfg, vec![sphere_target(&cfg)], 11))
        .await
        .unwrap();
    let cal = client.calibrate(capture, 0.063, None).await.unwrap();
    assert!(cal.k > 0.0);

    let recheck = client
        .simulate(&sim_request(&cfg, vec![sphere_target(&cfg)], 12))
        .await
        .unwrap();
    let records = client.process(recheck, &cal, false).await.unwrap();
    assert_eq!(records.len(), 1);
    let sigma_c = sphere_rcs(0.063, cfg.wavelength().unwrap()).unwrap().area;
    let err = (records[0].rcs - sigma_c).abs() / sigma_c;
    assert!(err < 0.01, "sigma off by {:.3}%", err * 100.0);
}

#[tokio::test]
async fn process_rejects_garbage_and_empty_scenes() {
    let client = spawn_service().await;
    let cal = radmat_core::em::Calibration {
        k: 1e6,
        rho_ref: 1.0,
        source: String::new(),
    };
    let err = client
        .process(b"not a capture".to_vec(), &cal, false)
        .await
        .unwrap_err();
    match err {
        ClientError::Api { status, code, .. } => {
            assert_eq!(status, 400);
            assert_eq!(code, "malformed-capture");
        }
        other => panic!("unexpected error {other:?}"),
    }

    // noise-only capture: no target
    let cfg = small_config();
    let capture = client
        .simulate(&sim_request(&cfg, vec![], 3))
        .await
        .unwrap();
    let err = client.process(capture, &cal, false).await.unwrap_err();
    match err {
        ClientError::Api { status, code, .. } => {
            assert_eq!(status, 422);
            assert_eq!(code, "no-target");
        }
        other => panic!("unexpected error {other:?}"),
    }
}

#[tokio::test]
async fn index_identify_round_trip_over_http_stub() {
    let client = spawn_service().await;
    let index_resp = client
        .build_index(&api::IndexRequest {
            documents: vec![
                api::DocumentIn {
                    doc_id: "dielectrics.md".into(),
                    text: "Plastics have relative permittivity near two to three; \
                           glass sits near four to five; ceramics above five."
                        .into(),
                },
                api::DocumentIn {
                    doc_id: "metals.md".into(),
                    text: "Metals reflect nearly all incident millimetre wave power."
                        .into(),
                },
            ],
            chunk_size: 256,
            overlap: 32,
        })
        .await
        .unwrap();
    assert_eq!(index_resp.chunk_counts.len(), 2);
    assert!(index_resp.total_chunks >= 2);

    // a glass-like record, identified through the HTTP stub endpoint
    let params = api::EmParameters {
        detection: radmat_core::dsp::TargetDetection {
            range: 1.2,
            velocity: 0.0,
            angle: 0.0,
            snr_linear: 900.0,
            peak_bin: (0, 0, 0),
        },
        rcs: 0.0009,
        rho: 1.0 / 9.0,
        gamma_f: 1.0 / 3.0,
        epsilon_r: 4.0,
        metal_like: false,
    };
    let verdict = client
        .identify(&api::IdentifyRequest {
            params: params.clone(),
            index_b64: Some(index_resp.index_b64.clone()),
            with_rag: true,
            use_llm: true,
            top_k: 2,
            endpoint: Some(api::EndpointSpec {
                base_url: client.stub_llm_url(),
                model: "rule-stub".into(),
                api_key: None,
                timeout_s: 10.0,
                retries: 0,
            }),
        })
        .await
        .unwrap();
    assert_eq!(verdict.canonical_class, api::CanonicalClass::Glass);
    assert_eq!(verdict.mode, api::VerdictMode::LlmRag);
    assert!(!verdict.sources.is_empty());

    // rule-only needs neither index nor endpoint
    let verdict = client
        .identify(&api::IdentifyRequest {
            params,
            index_b64: None,
            with_rag: false,
            use_llm: false,
            top_k: 4,
            endpoint: None,
        })
        .await
        .unwrap();
    assert_eq!(verdict.mode, api::VerdictMode::RuleBased);
    assert_eq!(verdict.canonical_class, api::CanonicalClass::Glass);
}

#[tokio::test]
async fn identify_without_index_when_rag_requested_is_a_client_error() {
    let client = spawn_service().await;
    let params = api::EmParameters {
        detection: radmat_core::dsp::TargetDetection {
            range: 1.0,
            velocity: 0.0,
            angle: 0.0,
            snr_linear: 100.0,
            peak_bin: (0, 0, 0),
        },
        rcs: 0.001,
        rho: 0.1,
        gamma_f: 0.3,
        epsilon_r: 3.0,
        metal_like: false,
    };
    let err = client
        .identify(&api::IdentifyRequest {
            params,
            index_b64: None,
            with_rag: true,
            use_llm: true,
            top_k: 4,
            endpoint: Some(api::EndpointSpec {
                base_url: "stub:".into(),
                model: "m".into(),
                api_key: None,
                timeout_s: 5.0,
                retries: 0,
            }),
        })
        .await
        .unwrap_err();
    match err {
        ClientError::Api { status, code, .. } => {
            assert_eq!(status, 400);
            assert_eq!(code, "missing-index");
        }
        other => panic!("unexpected {other:?}"),
    }
}

#[tokio::test]
async fn report_runs_the_suite_with_accuracy_per_mode() {
    let client = spawn_service().await;
    let cfg = RadarConfig::default();
    let objects = vec![
        api::ReportObject {
            label: "metal box".into(),
            material: api::CanonicalClass::Metal,
            epsilon_r: None,
            perfect_reflector: true,
            range_m: 0.9,
            velocity_mps: 0.0,
            angle_deg: 0.0,
        },
        api::ReportObject {
            label: "glass bottle".into(),
            material: api::CanonicalClass::Glass,
            epsilon_r: Some(4.0),
            perfect_reflector: false,
            range_m: 1.2,
            velocity_mps: 0.0,
            angle_deg: 0.0,
        },
        api::ReportObject {
            label: "plastic bottle".into(),
            material: api::CanonicalClass::Plastic,
            epsilon_r: Some(2.5),
            perfect_reflector: false,
            range_m: 1.0,
            velocity_mps: 0.0,
            angle_deg: 0.0,
        },
    ];
    let resp = client
        .report(&api::ReportRequest {
            config: cfg,
            objects,
            modes: vec![api::ReportMode::Rule, api::ReportMode::LlmRag],
            seed: 77,
            index_b64: None,
            endpoint: Some(api::EndpointSpec {
                base_url: client.stub_llm_url(),
                model: "rule-stub".into(),
                api_key: None,
                timeout_s: 10.0,
                retries: 0,
            }),
            top_k: 2,
            sphere_diameter_m: 0.063,
        })
        .await;
    // llm-rag without an index must fail loudly
    assert!(resp.is_err());

    let client2 = spawn_service().await;
    let index = client2
        .build_index(&api::IndexRequest {
            documents: vec![api::DocumentIn {
                doc_id: "notes.md".into(),
                text: "Permittivity bands: plastic two to three, glass four to five, \
                       ceramic above five; metals reflect nearly everything."
                    .into(),
            }],
            chunk_size: 256,
            overlap: 32,
        })
        .await
        .unwrap();
    let objects = vec![
        api::ReportObject {
            label: "metal box".into(),
            material: api::CanonicalClass::Metal,
            epsilon_r: None,
            perfect_reflector: true,
            range_m: 0.9,
            velocity_mps: 0.0,
            angle_deg: 0.0,
        },
        api::ReportObject {
            label: "glass bottle".into(),
            material: api::CanonicalClass::Glass,
            epsilon_r: Some(4.0),
            perfect_reflector: false,
            range_m: 1.2,
            velocity_mps: 0.0,
            angle_deg: 0.0,
        },
    ];
    let resp = client2
        .report(&api::ReportRequest {
            config: RadarConfig::default(),
            objects,
            modes: vec![api::ReportMode::Rule, api::ReportMode::LlmNoRag, api::ReportMode::LlmRag],
            seed: 78,
            index_b64: Some(index.index_b64),
            endpoint: Some(api::EndpointSpec {
                base_url: client2.stub_llm_url(),
                model: "rule-stub".into(),
                api_key: None,
                timeout_s: 10.0,
                retries: 0,
            }),
            top_k: 2,
            sphere_diameter_m: 0.063,
        })
        .await
        .unwrap();
    assert_eq!(resp.rows.len(), 6);
    assert_eq!(resp.summaries.len(), 3);
    for s in &resp.summaries {
        assert_eq!(s.total, 2);
        assert_eq!(s.accuracy, s.correct as f64 / s.total as f64);
        assert_eq!(s.correct, 2, "mode {} misclassified", s.mode);
    }
}

#[tokio::test]
async fn simulated_em_chain_matches_direct_prca_math() {
    // the service's object synthesis and the core chain agree
    let cfg = RadarConfig::default();
    let probe = radmat_core::dsp::TargetDetection {
        range: 1.2,
        velocity: 0.0,
        angle: 0.0,
        snr_linear: 1.0,
        peak_bin: (0, 0, 0),
    };
    let cell = prca_area(&probe, &cfg).unwrap();
    assert!(cell.area > 0.0);
}
