//! Single-hop HTTP GET abstraction.
//!
//! Transports never follow redirects themselves; [`super::session`] does,
//! so the redirect cap and loop detection behave the same for live and
//! recorded traffic.

use std::collections::HashMap;
use std::path::Path;
use std::time::Duration;

use serde::Deserialize;

use super::HarvestError;

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct HttpResponse {
    pub status: u16,
    /// Header names are lowercase; repeated headers appear once per value.
    pub headers: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl HttpResponse {
    pub fn ok(body: impl Into<Vec<u8>>) -> Self {
        Self {
            status: 200,
            headers: Vec::new(),
            body: body.into(),
        }
    }

    pub fn with_status(mut self, status: u16) -> Self {
        self.status = status;
        self
    }

    pub fn with_header(mut self, name: &str, value: impl Into<String>) -> Self {
        self.headers.push((name.to_ascii_lowercase(), value.into()));
        self
    }

    pub fn header(&self, name: &str) -> Option<&str> {
        self.headers
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn header_all<'a>(&'a self, name: &'a str) -> impl Iterator<Item = &'a str> + 'a {
        self.headers
            .iter()
            .filter(move |(k, _)| k.eq_ignore_ascii_case(name))
            .map(|(_, v)| v.as_str())
    }

    pub fn content_type(&self) -> Option<&str> {
        self.header("content-type")
    }

    pub fn is_redirect(&self) -> bool {
        matches!(self.status, 301 | 302 | 303 | 307 | 308)
    }
}

pub trait HttpTransport: Send + Sync {
    fn get(&self, url: &str) -> Result<HttpResponse, HarvestError>;
}

/// Serves canned responses keyed by exact URL. Unknown URLs produce a
/// network error, which is how recorded fixtures model unreachable hosts.
#[derive(Debug, Clone, Default)]
pub struct StaticTransport {
    responses: HashMap<String, HttpResponse>,
}

impl StaticTransport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, url: impl Into<String>, response: HttpResponse) -> &mut Self {
        self.responses.insert(url.into(), response);
        self
    }

    pub fn with(mut self, url: impl Into<String>, response: HttpResponse) -> Self {
        self.insert(url, response);
        self
    }

    pub fn len(&self) -> usize {
        self.responses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.responses.is_empty()
    }

    /// Loads a recorded fixture set: `<dir>/fixtures.json` lists entries of
    /// `{ "url", "status", "headers": [[name, value], ...], "body_file" | "body" }`
    /// with `body_file` relative to `dir`.
    pub fn from_dir(dir: &Path) -> Result<Self, HarvestError> {
        #[derive(Deserialize)]
        struct Entry {
            url: String,
            #[serde(default = "default_status")]
            status: u16,
            #[serde(default)]
            headers: Vec<(String, String)>,
            #[serde(default)]
            body: Option<String>,
            #[serde(default)]
            body_file: Option<String>,
        }
        fn default_status() -> u16 {
            200
        }

        let manifest = dir.join("fixtures.json");
        let text = std::fs::read_to_string(&manifest)
            .map_err(|e| HarvestError::Parse(format!("{}: {e}", manifest.display())))?;
        let entries: Vec<Entry> = serde_json::from_str(&text)
            .map_err(|e| HarvestError::Parse(format!("{}: {e}", manifest.display())))?;
        let mut transport = Self::new();
        for entry in entries {
            let body = match (entry.body, entry.body_file) {
                (_, Some(file)) => {
                    let path = dir.join(&file);
                    std::fs::read(&path)
                        .map_err(|e| HarvestError::Parse(format!("{}: {e}", path.display())))?
                }
                (Some(body), None) => body.into_bytes(),
                (None, None) => Vec::new(),
            };
            let mut response = HttpResponse::ok(body).with_status(entry.status);
            for (k, v) in entry.headers {
                response = response.with_header(&k, v);
            }
            transport.insert(entry.url, response);
        }
        Ok(transport)
    }
}

impl HttpTransport for StaticTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, HarvestError> {
        self.responses
            .get(url)
            .cloned()
            .ok_or_else(|| HarvestError::Network(format!("no route to {url}")))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Timeouts {
    pub connect: Duration,
    pub total: Duration,
}

impl Default for Timeouts {
    fn default() -> Self {
        Self {
            connect: Duration::from_secs(10),
            total: Duration::from_secs(30),
        }
    }
}

/// Live transport over `reqwest`'s blocking client with redirects disabled.
#[cfg(feature = "http")]
pub struct ReqwestTransport {
    client: reqwest::blocking::Client,
}

#[cfg(feature = "http")]
impl ReqwestTransport {
    pub fn new(timeouts: Timeouts) -> Result<Self, HarvestError> {
        let client = reqwest::blocking::Client::builder()
            .connect_timeout(timeouts.connect)
            .timeout(timeouts.total)
            .redirect(reqwest::redirect::Policy::none())
            .user_agent(concat!("fair-assess/", env!("CARGO_PKG_VERSION")))
            .build()
            .map_err(|e| HarvestError::Network(e.to_string()))?;
        Ok(Self { client })
    }
}

#[cfg(feature = "http")]
impl HttpTransport for ReqwestTransport {
    fn get(&self, url: &str) -> Result<HttpResponse, HarvestError> {
        let response = self
            .client
            .get(url)
            .send()
            .map_err(|e| HarvestError::Network(e.to_string()))?;
        let status = response.status().as_u16();
        let headers = response
            .headers()
            .iter()
            .filter_map(|(k, v)| {
                v.to_str()
                    .ok()
                    .map(|v| (k.as_str().to_ascii_lowercase(), v.to_string()))
            })
            .collect();
        let body = response
            .bytes()
            .map_err(|e| HarvestError::Network(e.to_string()))?
            .to_vec();
        Ok(HttpResponse {
            status,
            headers,
            body,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn static_transport_misses_are_network_errors() {
        let t = StaticTransport::new().with("http://a/", HttpResponse::ok("x"));
        assert_eq!(t.get("http://a/").unwrap().body, b"x");
        assert!(matches!(t.get("http://b/"), Err(HarvestError::Network(_))));
    }

    #[test]
    fn headers_are_case_insensitive() {
        let r = HttpResponse::ok("")
            .with_header("Link", "<a>; rel=x")
            .with_header("LINK", "<b>; rel=y");
        assert_eq!(r.header_all("link").count(), 2);
    }

    #[test]
    fn loads_fixture_dir() {
        let dir = tempfile::tempdir().unwrap();
        std::fs::write(dir.path().join("page.html"), "<html></html>").unwrap();
        std::fs::write(
            dir.path().join("fixtures.json"),
            r#"[{"url":"http://x/","headers":[["Content-Type","text/html"]],"body_file":"page.html"},
                {"url":"http://x/missing","status":404,"body":"nope"}]"#,
        )
        .unwrap();
        let t = StaticTransport::from_dir(dir.path()).unwrap();
        let r = t.get("http://x/").unwrap();
        assert_eq!(r.content_type(), Some("text/html"));
        assert_eq!(t.get("http://x/missing").unwrap().status, 404);
    }

    #[cfg(feature = "http")]
    #[test]
    fn unreachable_host_is_network_error() {
        let t = ReqwestTransport::new(Timeouts {
            connect: Duration::from_secs(2),
            total: Duration::from_secs(4),
        })
        .unwrap();
        assert!(matches!(
            t.get("http://127.0.0.1:1/oai"),
            Err(HarvestError::Network(_))
        ));
    }
}
