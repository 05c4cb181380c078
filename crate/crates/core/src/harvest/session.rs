//! Per-evaluation fetch session: redirect handling plus a response cache
//! so that the tests of one evaluation share a single fetch per URL.
//! A session is never shared across evaluations.

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use url::Url;

use super::transport::{HttpResponse, HttpTransport, Timeouts};
use super::HarvestError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HarvestSettings {
    pub timeouts: Timeouts,
    pub redirect_cap: usize,
    /// How many data references are probed for access checks.
    pub max_data_probes: usize,
}

impl Default for HarvestSettings {
    fn default() -> Self {
        Self {
            timeouts: Timeouts::default(),
            redirect_cap: 5,
            max_data_probes: 3,
        }
    }
}

/// Final response of a redirect chain.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fetched {
    pub requested_url: String,
    pub final_url: String,
    pub redirects: usize,
    pub response: HttpResponse,
}

pub struct HarvestSession {
    transport: Arc<dyn HttpTransport>,
    settings: HarvestSettings,
    cache: Mutex<HashMap<String, Result<Arc<Fetched>, HarvestError>>>,
}

impl HarvestSession {
    pub fn new(transport: Arc<dyn HttpTransport>, settings: HarvestSettings) -> Self {
        Self {
            transport,
            settings,
            cache: Mutex::new(HashMap::new()),
        }
    }

    pub fn settings(&self) -> &HarvestSettings {
        &self.settings
    }

    /// GET `url`, following up to `redirect_cap` redirects. Any final status
    /// is returned; use [`Self::fetch_ok`] to treat status >= 400 as an error.
    pub fn fetch(&self, url: &str) -> Result<Arc<Fetched>, HarvestError> {
        if let Some(hit) = self.cache.lock().unwrap().get(url) {
            return hit.clone();
        }
        let result = self.fetch_uncached(url).map(Arc::new);
        self.cache
            .lock()
            .unwrap()
            .insert(url.to_string(), result.clone());
        result
    }

    pub fn fetch_ok(&self, url: &str) -> Result<Arc<Fetched>, HarvestError> {
        let fetched = self.fetch(url)?;
        if fetched.response.status >= 400 {
            return Err(HarvestError::Http {
                status: fetched.response.status,
                url: fetched.final_url.clone(),
            });
        }
        Ok(fetched)
    }

    /// Number of distinct URLs fetched so far.
    pub fn cached_urls(&self) -> usize {
        self.cache.lock().unwrap().len()
    }

    fn fetch_uncached(&self, url: &str) -> Result<Fetched, HarvestError> {
        let mut current = Url::parse(url).map_err(|_| HarvestError::InvalidUrl(url.to_string()))?;
        let mut visited = vec![current.to_string()];
        let mut redirects = 0;
        loop {
            let response = self.transport.get(current.as_str())?;
            if !response.is_redirect() {
                return Ok(Fetched {
                    requested_url: url.to_string(),
                    final_url: current.to_string(),
                    redirects,
                    response,
                });
            }
            let Some(location) = response.header("location") else {
                // a redirect without a target is the final answer
                return Ok(Fetched {
                    requested_url: url.to_string(),
                    final_url: current.to_string(),
                    redirects,
                    response,
                });
            };
            let next = current
                .join(location.trim())
                .map_err(|_| HarvestError::InvalidUrl(location.to_string()))?;
            redirects += 1;
            if redirects > self.settings.redirect_cap || visited.contains(&next.to_string()) {
                return Err(HarvestError::RedirectLoop {
                    cap: self.settings.redirect_cap,
                    url: url.to_string(),
                });
            }
            visited.push(next.to_string());
            current = next;
        }
    }
}
