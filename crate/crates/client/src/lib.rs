//! Typed client for the radar material identification service.

use radmat_api as api;
use radmat_core::em::Calibration;

#[derive(Debug, thiserror::Error)]
pub enum ClientError {
    #[error("transport: {0}")]
    Transport(#[from] reqwest::Error),

    #[error("service error {status} [{code}]: {message}")]
    Api {
        status: u16,
        code: String,
        message: String,
    },
}

#[derive(Debug, Clone)]
pub struct Client {
    base_url: String,
    http: reqwest::Client,
}

impl Client {
    /// `base_url` up to the host/port, e.g. `http://127.0.0.1:8787`.
    pub fn new(base_url: impl Into<String>) -> Result<Self, ClientError> {
        let http = reqwest::Client::builder().build()?;
        Ok(Client {
            base_url: base_url.into().trim_end_matches('/').to_string(),
            http,
        })
    }

    pub fn base_url(&self) -> &str {
        &self.base_url
    }

    /// The service's stub chat-completions root, usable as an endpoint
    /// base URL.
    pub fn stub_llm_url(&self) -> String {
        format!("{}{}", self.base_url, api::paths::STUB_LLM)
    }

    fn url(&self, path: &str) -> String {
        format!("{}{}", self.base_url, path)
    }

    async fn check(resp: reqwest::Response) -> Result<reqwest::Response, ClientError> {
        let status = resp.status();
        if status.is_success() {
            return Ok(resp);
        }
        let code_msg = resp
            .json::<api::ErrorBody>()
            .await
            .map(|b| (b.code, b.error))
            .unwrap_or_else(|_| ("unknown".into(), "no error body".into()));
        Err(ClientError::Api {
            status: status.as_u16(),
            code: code_msg.0,
            message: code_msg.1,
        })
    }

    pub async fn health(&self) -> Result<api::HealthResponse, ClientError> {
        let resp = self.http.get(self.url(api::paths::HEALTH)).send().await?;
        Ok(Self::check(resp).await?.json().await?)
    }

    /// Synthesize a capture; returns the capture file bytes.
    pub async fn simulate(&self, req: &api::SimulateRequest) -> Result<Vec<u8>, ClientError> {
        let resp = self
            .http
            .post(self.url(api::paths::SIMULATE))
            .json(req)
            .send()
            .await?;
        Ok(Self::check(resp).await?.bytes().await?.to_vec())
    }

    pub async fn calibrate(
        &self,
        capture: Vec<u8>,
        sphere_diameter_m: f64,
        rho_ref: Option<f64>,
    ) -> Result<Calibration, ClientError> {
        let mut url = format!(
            "{}?sphere_diameter_m={sphere_diameter_m}",
            self.url(api::paths::CALIBRATE)
        );
        if let Some(r) = rho_ref {
            url.push_str(&format!("&rho_ref={r}"));
        }
        let resp = self.http.post(url).body(capture).send().await?;
        Ok(Self::check(resp).await?.json().await?)
    }

    pub async fn process(
        &self,
        capture: Vec<u8>,
        cal: &Calibration,
        all_targets: bool,
    ) -> Result<Vec<api::EmParameters>, ClientError> {
        Ok(self
            .process_full(capture, cal, all_targets, false)
            .await?
            .records)
    }

    /// As [`process`](Self::process), also returning the RD/RA power maps in
    /// the binary matrix format.
    pub async fn process_with_maps(
        &self,
        capture: Vec<u8>,
        cal: &Calibration,
        all_targets: bool,
    ) -> Result<api::ProcessResponse, ClientError> {
        self.process_full(capture, cal, all_targets, true).await
    }

    async fn process_full(
        &self,
        capture: Vec<u8>,
        cal: &Calibration,
        all_targets: bool,
        include_maps: bool,
    ) -> Result<api::ProcessResponse, ClientError> {
        let url = format!(
            "{}?k={}&rho_ref={}&all_targets={all_targets}&include_maps={include_maps}",
            self.url(api::paths::PROCESS),
            cal.k,
            cal.rho_ref
        );
        let resp = self.http.post(url).body(capture).send().await?;
        Ok(Self::check(resp).await?.json().await?)
    }

    pub async fn build_index(
        &self,
        req: &api::IndexRequest,
    ) -> Result<api::IndexResponse, ClientError> {
        let resp = self
            .http
            .post(self.url(api::paths::INDEX))
            .json(req)
            .send()
            .await?;
        Ok(Self::check(resp).await?.json().await?)
    }

    pub async fn identify(
        &self,
        req: &api::IdentifyRequest,
    ) -> Result<api::MaterialVerdict, ClientError> {
        let resp = self
            .http
            .post(self.url(api::paths::IDENTIFY))
            .json(req)
            .send()
            .await?;
        Ok(Self::check(resp).await?.json().await?)
    }

    pub async fn report(
        &self,
        req: &api::ReportRequest,
    ) -> Result<api::ReportResponse, ClientError> {
        let resp = self
            .http
            .post(self.url(api::paths::REPORT))
            .json(req)
            .send()
            .await?;
        Ok(Self::check(resp).await?.json().await?)
    }
}
