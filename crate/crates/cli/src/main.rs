//! Command-line front end. Every operation runs through the HTTP service:
//! either one named with --server / RADMAT_SERVER, or an in-process instance
//! spawned on a loopback port for standalone use.

mod output;
mod suite;

use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use radmat_api as api;
use radmat_client::Client;
use radmat_core::config::RadarConfig;
use radmat_core::em::Calibration;
use radmat_core::{em, scenario};

#[derive(Parser)]
#[command(
    name = "radmat",
    version,
    about = "Radar material identification: simulate, process, and classify"
)]
struct Cli {
    /// Service URL (e.g. http://127.0.0.1:8787). When omitted, an in-process
    /// service is started for the duration of the command.
    #[arg(long, global = true, env = "RADMAT_SERVER")]
    server: Option<String>,

    /// Radar config file (key = value). Built-in defaults when omitted.
    #[arg(long, global = true)]
    config: Option<PathBuf>,

    /// Seed for simulation noise.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Verbose diagnostics on stderr.
    #[arg(long, short, global = true)]
    verbose: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
struct EndpointArgs {
    /// Chat-completion endpoint base URL (e.g. http://127.0.0.1:11434/v1).
    #[arg(long, env = "RADMAT_LLM_BASE_URL")]
    endpoint_url: Option<String>,

    /// Model name at the endpoint.
    #[arg(long, env = "RADMAT_LLM_MODEL", default_value = "deepseek-r1:14b")]
    model: String,

    /// API key, if the endpoint needs one (never logged).
    #[arg(long, env = "RADMAT_LLM_API_KEY")]
    api_key: Option<String>,

    /// Use the service's deterministic rule-table stub instead of a live model.
    #[arg(long)]
    stub_llm: bool,

    /// Request timeout, seconds.
    #[arg(long, default_value_t = 120.0)]
    timeout_s: f64,

    /// Retries after a failed attempt.
    #[arg(long, default_value_t = 2)]
    retries: u32,
}

impl EndpointArgs {
    fn resolve(&self, client: &Client) -> Option<api::EndpointSpec> {
        let base_url = if self.stub_llm {
            Some(client.stub_llm_url())
        } else {
            self.endpoint_url.clone()
        }?;
        Some(api::EndpointSpec {
            base_url,
            model: self.model.clone(),
            api_key: self.api_key.clone(),
            timeout_s: self.timeout_s,
            retries: self.retries,
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run the HTTP service.
    Serve {
        /// Bind address.
        #[arg(long, default_value = "127.0.0.1:8787")]
        bind: String,
    },

    /// Synthesize a capture file from a scenario of point targets.
    Simulate {
        /// Scenario file ([target] blocks).
        #[arg(long)]
        scenario: PathBuf,
        /// Output capture path.
        #[arg(long, short)]
        out: PathBuf,
        /// Override the per-sample noise power (default: scenario value or
        /// the config's thermal level).
        #[arg(long)]
        noise_power: Option<f64>,
    },

    /// Derive the system calibration from a lone reference-sphere capture.
    Calibrate {
        #[arg(long)]
        capture: PathBuf,
        /// Reference sphere diameter, m.
        #[arg(long, default_value_t = 0.063)]
        sphere_diameter: f64,
        /// Override the perfect-reflector reference reflectivity.
        #[arg(long)]
        rho_ref: Option<f64>,
        /// Output calibration path.
        #[arg(long, short)]
        out: PathBuf,
    },

    /// Extract electromagnetic parameter records from a capture.
    Process {
        #[arg(long)]
        capture: PathBuf,
        /// Calibration file from `calibrate`.
        #[arg(long)]
        cal: PathBuf,
        /// Output records path (stdout when omitted).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// One record per detection instead of the strongest only.
        #[arg(long)]
        all_targets: bool,
        /// Export the range-Doppler power map (binary matrix file).
        #[arg(long)]
        export_rd: Option<PathBuf>,
        /// Export the range-angle power map (binary matrix file).
        #[arg(long)]
        export_ra: Option<PathBuf>,
    },

    /// Chunk, embed, and index a directory of .txt/.md documents.
    Index {
        /// Directory of knowledge documents.
        #[arg(long)]
        docs: PathBuf,
        /// Output index path.
        #[arg(long, short)]
        out: PathBuf,
        #[arg(long, default_value_t = 512)]
        chunk_size: usize,
        #[arg(long, default_value_t = 64)]
        overlap: usize,
    },

    /// Identify the material behind a parameter record.
    Identify {
        /// Parameter record file from `process`.
        #[arg(long)]
        params: PathBuf,
        /// Knowledge index from `index` (required unless --no-rag/--no-llm).
        #[arg(long)]
        index: Option<PathBuf>,
        /// Skip retrieval (ablation arm).
        #[arg(long)]
        no_rag: bool,
        /// Skip the LLM and use the rule table.
        #[arg(long)]
        no_llm: bool,
        /// Retrieved chunk count.
        #[arg(long, short = 'k', default_value_t = 4)]
        top_k: usize,
        #[command(flatten)]
        endpoint: EndpointArgs,
        /// Also write the verdict record to this path.
        #[arg(long, short)]
        out: Option<PathBuf>,
    },

    /// Run the simulated object suite end-to-end under one or more modes
    /// and tabulate per-mode accuracy.
    Report {
        /// Suite file ([object] blocks with material ground truth).
        #[arg(long)]
        suite: PathBuf,
        /// Knowledge documents directory (for the llm-rag arm).
        #[arg(long)]
        knowledge: Option<PathBuf>,
        /// Modes to run: rule | llm-norag | llm-rag (comma separated).
        #[arg(long, value_delimiter = ',', default_value = "rule")]
        modes: Vec<String>,
        #[arg(long, short = 'k', default_value_t = 4)]
        top_k: usize,
        /// Reference sphere diameter for the internal calibration, m.
        #[arg(long, default_value_t = 0.063)]
        sphere_diameter: f64,
        #[command(flatten)]
        endpoint: EndpointArgs,
        /// Write the aligned text table here (stdout always gets a copy).
        #[arg(long, short)]
        out: Option<PathBuf>,
        /// Write machine-readable row records here.
        #[arg(long)]
        records_out: Option<PathBuf>,
    },
}

fn load_config(path: &Option<PathBuf>) -> Result<RadarConfig> {
    match path {
        Some(p) => RadarConfig::load(p).with_context(|| format!("loading config {}", p.display())),
        None => Ok(RadarConfig::default()),
    }
}

/// Captures embed their configuration; when --config is also given, make
/// sure the two agree.
fn check_capture_config(capture_path: &Path, config: &Option<PathBuf>) -> Result<()> {
    if let Some(cfg_path) = config {
        let want = RadarConfig::load(cfg_path)?;
        let cube = radmat_core::capture::load_capture(capture_path)
            .with_context(|| format!("reading capture {}", capture_path.display()))?;
        if cube.config() != &want {
            bail!(
                "--config {} does not match the configuration embedded in {}",
                cfg_path.display(),
                capture_path.display()
            );
        }
    }
    Ok(())
}

async fn connect(server: &Option<String>) -> Result<Client> {
    if let Some(url) = server {
        let client = Client::new(url.clone())?;
        client
            .health()
            .await
            .with_context(|| format!("service at {url} is not reachable"))?;
        return Ok(client);
    }
    let listener = tokio::net::TcpListener::bind(("127.0.0.1", 0))
        .await
        .context("binding the in-process service")?;
    let addr = listener.local_addr()?;
    tokio::spawn(radmat_service::serve(listener));
    let client = Client::new(format!("http://{addr}"))?;
    for _ in 0..50 {
        if client.health().await.is_ok() {
            tracing::debug!("in-process service ready on {addr}");
            return Ok(client);
        }
        tokio::time::sleep(std::time::Duration::from_millis(10)).await;
    }
    bail!("in-process service failed to come up");
}

#[tokio::main]
async fn main() {
    let cli = Cli::parse();
    tracing_subscriber::fmt()
        .with_writer(std::io::stderr)
        .with_env_filter(if cli.verbose {
            "debug"
        } else {
            "warn"
        })
        .init();
    if let Err(e) = run(cli).await {
        eprintln!("error: {e:#}");
        std::process::exit(1);
    }
}

async fn run(cli: Cli) -> Result<()> {
    match &cli.command {
        Command::Serve { bind } => {
            let listener = tokio::net::TcpListener::bind(bind)
                .await
                .with_context(|| format!("binding {bind}"))?;
            println!("service listening on http://{}", listener.local_addr()?);
            radmat_service::serve(listener).await?;
            Ok(())
        }

        Command::Simulate {
            scenario: scenario_path,
            out,
            noise_power,
        } => {
            let client = connect(&cli.server).await?;
            let config = load_config(&cli.config)?;
            let scn = scenario::load_scenario(scenario_path)?;
            let req = api::SimulateRequest {
                config,
                targets: scn.targets.clone(),
                noise_power: noise_power.or(scn.noise_power),
                seed: cli.seed,
            };
            let bytes = client.simulate(&req).await?;
            std::fs::write(out, &bytes)
                .with_context(|| format!("writing capture {}", out.display()))?;
            println!("{}", output::truth_table(&scn.targets));
            println!("wrote capture: {} ({} bytes)", out.display(), bytes.len());
            Ok(())
        }

        Command::Calibrate {
            capture,
            sphere_diameter,
            rho_ref,
            out,
        } => {
            check_capture_config(capture, &cli.config)?;
            let client = connect(&cli.server).await?;
            let bytes = std::fs::read(capture)
                .with_context(|| format!("reading capture {}", capture.display()))?;
            let cal = client
                .calibrate(bytes, *sphere_diameter, *rho_ref)
                .await?;
            cal.save(out)?;
            println!("K = {}", radmat_core::kv::fmt_f64(cal.k));
            println!("rho_ref = {}", radmat_core::kv::fmt_f64(cal.rho_ref));
            println!("wrote calibration: {}", out.display());
            Ok(())
        }

        Command::Process {
            capture,
            cal,
            out,
            all_targets,
            export_rd,
            export_ra,
        } => {
            check_capture_config(capture, &cli.config)?;
            let client = connect(&cli.server).await?;
            let bytes = std::fs::read(capture)
                .with_context(|| format!("reading capture {}", capture.display()))?;
            let cal = Calibration::load(cal)?;
            let include_maps = export_rd.is_some() || export_ra.is_some();
            let url_resp = client_process(&client, bytes, &cal, *all_targets, include_maps).await?;
            let text = em::em_records_to_string(&url_resp.records);
            match out {
                Some(p) => {
                    std::fs::write(p, &text)?;
                    println!("wrote {} record(s): {}", url_resp.records.len(), p.display());
                }
                None => print!("{text}"),
            }
            if let (Some(path), Some(b64)) = (export_rd, &url_resp.rd_map_b64) {
                std::fs::write(path, api::b64::decode(b64).map_err(anyhow::Error::msg)?)?;
                println!("wrote RD map: {}", path.display());
            }
            if let Some(path) = export_ra {
                match &url_resp.ra_map_b64 {
                    Some(b64) => {
                        std::fs::write(path, api::b64::decode(b64).map_err(anyhow::Error::msg)?)?;
                        println!("wrote RA map: {}", path.display());
                    }
                    None => bail!("service returned no RA map (single-channel capture?)"),
                }
            }
            Ok(())
        }

        Command::Index {
            docs,
            out,
            chunk_size,
            overlap,
        } => {
            let client = connect(&cli.server).await?;
            let documents = load_docs_dir(docs)?;
            if documents.is_empty() {
                bail!("no .txt or .md documents found in {}", docs.display());
            }
            let resp = client
                .build_index(&api::IndexRequest {
                    documents,
                    chunk_size: *chunk_size,
                    overlap: *overlap,
                })
                .await?;
            for c in &resp.chunk_counts {
                println!("{}: {} chunk(s)", c.doc_id, c.chunks);
            }
            std::fs::write(out, api::b64::decode(&resp.index_b64).map_err(anyhow::Error::msg)?)?;
            println!(
                "wrote index: {} ({} chunks total)",
                out.display(),
                resp.total_chunks
            );
            Ok(())
        }

        Command::Identify {
            params,
            index,
            no_rag,
            no_llm,
            top_k,
            endpoint,
            out,
        } => {
            let client = connect(&cli.server).await?;
            let text = std::fs::read_to_string(params)
                .with_context(|| format!("reading parameter record {}", params.display()))?;
            let record = em::em_record_from_str(&text)?;
            let use_llm = !no_llm;
            let with_rag = !no_rag;
            let index_b64 = if with_rag && use_llm {
                let path = index.as_ref().ok_or_else(|| {
                    anyhow::anyhow!(
                        "retrieval needs a knowledge index: pass --index <file> (or --no-rag)"
                    )
                })?;
                let bytes = std::fs::read(path)
                    .with_context(|| format!("reading index {}", path.display()))?;
                Some(api::b64::encode(&bytes))
            } else {
                None
            };
            let endpoint_spec = endpoint.resolve(&client);
            if use_llm && endpoint_spec.is_none() {
                bail!("no LLM endpoint configured: pass --endpoint-url, --stub-llm, or --no-llm");
            }
            let verdict = client
                .identify(&api::IdentifyRequest {
                    params: record,
                    index_b64,
                    with_rag,
                    use_llm,
                    top_k: *top_k,
                    endpoint: endpoint_spec,
                })
                .await?;
            let rec = radmat_reasoner::verdict_to_record(&verdict);
            print!("{rec}");
            if let Some(p) = out {
                std::fs::write(p, &rec)?;
            }
            Ok(())
        }

        Command::Report {
            suite,
            knowledge,
            modes,
            top_k,
            sphere_diameter,
            endpoint,
            out,
            records_out,
        } => {
            let client = connect(&cli.server).await?;
            let config = load_config(&cli.config)?;
            let objects = suite::load_suite(suite)?;
            let modes: Vec<api::ReportMode> = modes
                .iter()
                .map(|m| m.parse::<api::ReportMode>().map_err(anyhow::Error::msg))
                .collect::<Result<_>>()?;

            let needs_llm = modes
                .iter()
                .any(|m| matches!(m, api::ReportMode::LlmNoRag | api::ReportMode::LlmRag));
            let endpoint_spec = endpoint.resolve(&client);
            if needs_llm && endpoint_spec.is_none() {
                bail!("llm modes need an endpoint: pass --endpoint-url or --stub-llm");
            }

            let index_b64 = if modes.contains(&api::ReportMode::LlmRag) {
                let dir = knowledge.as_ref().ok_or_else(|| {
                    anyhow::anyhow!("the llm-rag mode needs --knowledge <dir> of .txt/.md documents")
                })?;
                let documents = load_docs_dir(dir)?;
                if documents.is_empty() {
                    bail!("no .txt or .md documents found in {}", dir.display());
                }
                let resp = client
                    .build_index(&api::IndexRequest {
                        documents,
                        chunk_size: 512,
                        overlap: 64,
                    })
                    .await?;
                tracing::debug!("indexed {} knowledge chunks", resp.total_chunks);
                Some(resp.index_b64)
            } else {
                None
            };

            let resp = client
                .report(&api::ReportRequest {
                    config,
                    objects,
                    modes,
                    seed: cli.seed,
                    index_b64,
                    endpoint: endpoint_spec,
                    top_k: *top_k,
                    sphere_diameter_m: *sphere_diameter,
                })
                .await?;

            let table = output::report_table(&resp);
            print!("{table}");
            if let Some(p) = out {
                std::fs::write(p, &table)?;
                println!("wrote report table: {}", p.display());
            }
            if let Some(p) = records_out {
                std::fs::write(p, output::report_records(&resp))?;
                println!("wrote report records: {}", p.display());
            }
            Ok(())
        }
    }
}

async fn client_process(
    client: &Client,
    capture: Vec<u8>,
    cal: &Calibration,
    all_targets: bool,
    include_maps: bool,
) -> Result<api::ProcessResponse> {
    // the typed helper covers the plain path; maps need the raw query form
    if !include_maps {
        let records = client.process(capture, cal, all_targets).await?;
        return Ok(api::ProcessResponse {
            records,
            rd_map_b64: None,
            ra_map_b64: None,
        });
    }
    Ok(client
        .process_with_maps(capture, cal, all_targets)
        .await?)
}

fn load_docs_dir(dir: &Path) -> Result<Vec<api::DocumentIn>> {
    let docs = radmat_rag::load_documents(dir)
        .with_context(|| format!("reading documents directory {}", dir.display()))?;
    Ok(docs
        .into_iter()
        .map(|(doc_id, text)| api::DocumentIn { doc_id, text })
        .collect())
}
