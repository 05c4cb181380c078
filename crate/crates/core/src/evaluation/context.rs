//! Context assembly: the generic harvesting flow shared by all plugins.
//!
//! Sources are tried in a fixed order (landing page, OAI-PMH, optional
//! repository API) and every failure is recorded rather than propagated, so
//! an evaluation proceeds on whatever evidence is reachable.

use std::sync::Arc;

use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;
use url::Url;

use crate::config::PluginConfig;
use crate::harvest::oai::request_url;
use crate::harvest::session::Fetched;
use crate::harvest::{
    extract_embedded_metadata, oai_get_record, oai_list_metadata_formats, parse_signposting,
    resolve_identifier, HarvestError, HarvestSession, IdentifierKind, IdentifierRef,
    MetadataElement, MetadataRecord, Signposting, Source,
};

/// Outcome of one HTTP request made while assembling a context.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EndpointProbe {
    pub url: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub final_url: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<u16>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub content_type: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl EndpointProbe {
    pub fn from_fetch(url: &str, result: &Result<Arc<Fetched>, HarvestError>) -> Self {
        match result {
            Ok(f) => Self {
                url: url.to_string(),
                final_url: Some(f.final_url.clone()),
                status: Some(f.response.status),
                content_type: f.response.content_type().map(str::to_string),
                error: None,
            },
            Err(e) => Self {
                url: url.to_string(),
                final_url: None,
                status: None,
                content_type: None,
                error: Some(e.to_string()),
            },
        }
    }

    /// Responded with a non-error status.
    pub fn reachable(&self) -> bool {
        self.status.is_some_and(|s| s < 400)
    }

    /// Responded, but asked for credentials.
    pub fn auth_required(&self) -> bool {
        matches!(self.status, Some(401 | 403))
    }

    fn scheme(&self) -> Option<String> {
        let u = self.final_url.as_deref().unwrap_or(&self.url);
        Url::parse(u).ok().map(|u| u.scheme().to_string())
    }

    /// Served over plain HTTP or HTTPS.
    pub fn standard_protocol(&self) -> bool {
        self.scheme().is_some_and(|s| s == "http" || s == "https")
    }

    pub fn uses_https(&self) -> bool {
        self.scheme().is_some_and(|s| s == "https")
    }

    pub fn is_html(&self) -> bool {
        self.content_type
            .as_deref()
            .is_some_and(|c| c.to_ascii_lowercase().starts_with("text/html"))
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct AccessProbes {
    pub landing: Option<EndpointProbe>,
    pub oai: Option<EndpointProbe>,
    pub data: Vec<EndpointProbe>,
}

/// Merged result of all metadata sources.
#[derive(Debug, Clone)]
pub struct Harvest {
    pub record: MetadataRecord,
    pub signposting: Signposting,
    pub probes: AccessProbes,
    /// Why individual sources contributed nothing.
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("no metadata source reachable for `{subject}`: {}", .reasons.join("; "))]
pub struct HarvestFailure {
    pub subject: String,
    pub reasons: Vec<String>,
}

/// Landing page of `subject` under `config`.
pub fn landing_url(config: &PluginConfig, subject: &IdentifierRef) -> String {
    match subject.kind {
        IdentifierKind::Url | IdentifierKind::Doi => subject
            .resolver_url
            .clone()
            .unwrap_or_else(|| config.landing_url(&subject.normalized)),
        IdentifierKind::Handle | IdentifierKind::InternalId => {
            config.landing_url(&subject.normalized)
        }
    }
}

/// The generic harvesting flow.
pub fn harvest_metadata(
    config: &PluginConfig,
    session: &HarvestSession,
    subject: &IdentifierRef,
) -> Result<Harvest, HarvestFailure> {
    let mut notes = Vec::new();
    let mut probes = AccessProbes::default();
    let mut any_source = false;

    // landing page: embedded metadata and typed links
    let url = landing_url(config, subject);
    let fetched = session.fetch(&url);
    let probe = EndpointProbe::from_fetch(&url, &fetched);
    let mut landing_elements = Vec::new();
    let mut signposting = Signposting::default();
    match &fetched {
        Ok(f) if probe.reachable() => {
            any_source = true;
            let headers: Vec<String> = f.response.header_all("link").map(str::to_string).collect();
            signposting = parse_signposting(&headers, Some(&f.response.body), Some(&f.final_url));
            landing_elements =
                extract_embedded_metadata(&f.response.body, subject.clone()).elements;
        }
        Ok(f) => notes.push(format!(
            "landing page {url} answered HTTP {}",
            f.response.status
        )),
        Err(e) => notes.push(format!("landing page {url}: {e}")),
    }
    probes.landing = Some(probe);

    // OAI-PMH: formats for the item, then the record in the first preferred format
    let oai_id = config.oai_identifier(&subject.normalized);
    let mut record = MetadataRecord::new(subject.clone());
    let mut oai_elements = Vec::new();
    match request_url(
        &config.oai_endpoint,
        &[("verb", "ListMetadataFormats"), ("identifier", &oai_id)],
    ) {
        Ok(formats_url) => {
            probes.oai = Some(EndpointProbe::from_fetch(
                &formats_url,
                &session.fetch(&formats_url),
            ));
        }
        Err(e) => notes.push(format!("OAI-PMH endpoint: {e}")),
    }
    let prefixes: Vec<&String> =
        match oai_list_metadata_formats(session, &config.oai_endpoint, Some(&oai_id)) {
            Ok(formats) => {
                any_source = true;
                let chosen: Vec<&String> = config
                    .metadata_prefixes
                    .iter()
                    .filter(|p| formats.iter().any(|f| &f.prefix == *p))
                    .collect();
                if chosen.is_empty() {
                    notes.push(format!(
                        "OAI-PMH offers none of the configured formats ({})",
                        config.metadata_prefixes.join(", ")
                    ));
                }
                record.add_formats(formats);
                chosen
            }
            Err(e) => {
                notes.push(format!("OAI-PMH ListMetadataFormats for {oai_id}: {e}"));
                // some endpoints reject item-scoped listings; still try the record
                match e {
                    HarvestError::Protocol { .. } | HarvestError::Parse(_) => {
                        config.metadata_prefixes.iter().take(1).collect()
                    }
                    _ => Vec::new(),
                }
            }
        };
    for prefix in prefixes {
        match oai_get_record(session, &config.oai_endpoint, &oai_id, prefix) {
            Ok(r) => {
                any_source = true;
                oai_elements = r.elements;
                break;
            }
            Err(e) => notes.push(format!("OAI-PMH GetRecord {oai_id} ({prefix}): {e}")),
        }
    }

    // optional repository-native API
    let mut api_elements = Vec::new();
    if let Some(api_url) = config.repository_api_url(&subject.normalized) {
        match session
            .fetch_ok(&api_url)
            .and_then(|f| parse_api_document(&f.response.body))
        {
            Ok(els) => {
                any_source = true;
                api_elements = els;
            }
            Err(e) => notes.push(format!("repository API {api_url}: {e}")),
        }
    }

    if !any_source {
        return Err(HarvestFailure {
            subject: subject.raw.clone(),
            reasons: notes,
        });
    }
    let mut elements = oai_elements;
    elements.extend(api_elements);
    elements.extend(landing_elements);
    record.elements = elements;
    Ok(Harvest {
        record,
        signposting,
        probes,
        notes,
    })
}

/// Resolvable identifiers found under the configured data identifier terms,
/// first occurrence first.
pub fn data_refs(config: &PluginConfig, metadata: &MetadataRecord) -> Vec<IdentifierRef> {
    let mut out: Vec<IdentifierRef> = Vec::new();
    for pattern in &config.data_identifier_terms {
        for e in metadata.values(pattern) {
            let Ok(id) = resolve_identifier(&e.value) else {
                continue;
            };
            if id.kind.is_resolvable() && !out.iter().any(|o| o.normalized == id.normalized) {
                out.push(id);
            }
        }
    }
    out
}

/// Requests up to `max_data_probes` data references.
pub fn probe_data(session: &HarvestSession, refs: &[IdentifierRef]) -> Vec<EndpointProbe> {
    refs.iter()
        .filter_map(|r| r.resolver_url.as_deref())
        .take(session.settings().max_data_probes)
        .map(|url| EndpointProbe::from_fetch(url, &session.fetch(url)))
        .collect()
}

/// Elements from a repository API document. Accepted shapes:
/// `[{"key": term, "value": v, "language": l}, ...]`,
/// `{term: v | [v, ...] | [{"value": v, "language": l}, ...]}`, and either of
/// those wrapped in a top-level `"metadata"` member.
pub fn parse_api_document(body: &[u8]) -> Result<Vec<MetadataElement>, HarvestError> {
    let doc: Value =
        serde_json::from_slice(body).map_err(|e| HarvestError::Parse(e.to_string()))?;
    let doc = match &doc {
        Value::Object(m) if m.contains_key("metadata") => &m["metadata"],
        other => other,
    };
    let mut out = Vec::new();
    let mut push = |term: &str, value: &Value, language: Option<&Value>| {
        let text = match value {
            Value::String(s) => s.clone(),
            Value::Number(n) => n.to_string(),
            Value::Bool(b) => b.to_string(),
            _ => return,
        };
        let language = language.and_then(Value::as_str).map(str::to_string);
        if let Ok(e) = MetadataElement::new(term, text.trim(), Source::RepositoryApi) {
            out.push(e.with_language(language));
        }
    };
    match doc {
        Value::Array(items) => {
            for item in items {
                let term = item
                    .get("key")
                    .or_else(|| item.get("element"))
                    .and_then(Value::as_str);
                if let (Some(term), Some(value)) = (term, item.get("value")) {
                    push(term, value, item.get("language"));
                }
            }
        }
        Value::Object(map) => {
            for (term, v) in map {
                match v {
                    Value::Array(values) => {
                        for entry in values {
                            match entry.get("value") {
                                Some(value) => push(term, value, entry.get("language")),
                                None => push(term, entry, None),
                            }
                        }
                    }
                    other => push(term, other, None),
                }
            }
        }
        _ => {
            return Err(HarvestError::Parse(
                "expected a JSON array or object".into(),
            ))
        }
    }
    Ok(out)
}
