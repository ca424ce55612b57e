//! Live hit-count client over an HTTP JSON search API.
//!
//! The endpoint comes from `SEARCH_API_ENDPOINT`; `SEARCH_API_KEY`, when
//! set, is sent as the `Ocp-Apim-Subscription-Key` header. The query is the
//! sentence in quotes (exact-phrase semantics) and the reply is probed for
//! the common total-count fields, so the client works against several
//! search API response shapes.

use std::time::Duration;

use occufit_core::webcount::{ClientError, CountSource, HitCountClient};
use serde_json::Value;

pub const ENDPOINT_VAR: &str = "SEARCH_API_ENDPOINT";
pub const KEY_VAR: &str = "SEARCH_API_KEY";

pub struct HttpSearchClient {
    endpoint: String,
    key: Option<String>,
    http: reqwest::blocking::Client,
}

impl HttpSearchClient {
    pub fn from_env() -> Result<Self, String> {
        let endpoint = std::env::var(ENDPOINT_VAR)
            .map_err(|_| format!("{ENDPOINT_VAR} is not set; live mode needs a search endpoint"))?;
        let key = std::env::var(KEY_VAR).ok();
        let http = reqwest::blocking::Client::builder()
            .timeout(Duration::from_secs(10))
            .build()
            .map_err(|e| format!("http client: {e}"))?;
        Ok(HttpSearchClient {
            endpoint,
            key,
            http,
        })
    }
}

impl HitCountClient for HttpSearchClient {
    fn hit_count(&mut self, sentence: &str) -> Result<u64, ClientError> {
        let mut request = self
            .http
            .get(&self.endpoint)
            .query(&[("q", format!("\"{sentence}\"")), ("count", "1".to_string())]);
        if let Some(key) = &self.key {
            request = request.header("Ocp-Apim-Subscription-Key", key);
        }
        let response = request
            .send()
            .map_err(|e| ClientError::Transport(e.to_string()))?;
        let status = response.status();
        if !status.is_success() {
            return Err(ClientError::Api(format!("status {status}")));
        }
        let body: Value = response
            .json()
            .map_err(|e| ClientError::Api(format!("malformed response: {e}")))?;
        parse_hits(&body)
            .ok_or_else(|| ClientError::Api("response carries no total hit count".to_string()))
    }

    fn source(&self) -> CountSource {
        CountSource::Live
    }
}

/// Pulls the estimated total match count out of a search API response.
pub fn parse_hits(body: &Value) -> Option<u64> {
    if let Some(total) = body
        .pointer("/webPages/totalEstimatedMatches")
        .and_then(Value::as_u64)
    {
        return Some(total);
    }
    if let Some(total) = body.get("totalEstimatedMatches").and_then(Value::as_u64) {
        return Some(total);
    }
    if let Some(total) = body.get("total_results").and_then(Value::as_u64) {
        return Some(total);
    }
    match body.pointer("/searchInformation/totalResults") {
        Some(Value::Number(n)) => n.as_u64(),
        Some(Value::String(s)) => s.parse().ok(),
        _ => None,
    }
}
