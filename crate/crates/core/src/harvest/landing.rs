//! Landing page retrieval and embedded `<meta>` harvesting.

use scraper::{Html, Selector};
use std::sync::LazyLock;

use super::identifier::IdentifierRef;
use super::session::HarvestSession;
use super::{HarvestError, MetadataElement, MetadataRecord, Source};

static META: LazyLock<Selector> = LazyLock::new(|| Selector::parse("meta[name][content]").unwrap());

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LandingPage {
    pub requested_url: String,
    pub final_url: String,
    pub status: u16,
    pub content_type: Option<String>,
    pub link_headers: Vec<String>,
    pub body: Vec<u8>,
}

/// Fetches a landing page following redirects up to the session's cap.
/// Final statuses of 400 and above are errors.
pub fn fetch_landing_page(
    session: &HarvestSession,
    url: &str,
) -> Result<LandingPage, HarvestError> {
    let fetched = session.fetch_ok(url)?;
    let r = &fetched.response;
    Ok(LandingPage {
        requested_url: fetched.requested_url.clone(),
        final_url: fetched.final_url.clone(),
        status: r.status,
        content_type: r.content_type().map(str::to_string),
        link_headers: r.header_all("link").map(str::to_string).collect(),
        body: r.body.clone(),
    })
}

/// Harvests Dublin Core (`DC.*`, `DCTERMS.*`) and Highwire (`citation_*`)
/// meta tags. Never fails: markup errors are recovered by the HTML parser
/// and undecodable bytes are replaced.
pub fn extract_embedded_metadata(document: &[u8], subject: IdentifierRef) -> MetadataRecord {
    let text = String::from_utf8_lossy(document);
    let html = Html::parse_document(&text);
    let mut elements = Vec::new();
    for meta in html.select(&META) {
        let attrs = meta.value();
        let (Some(name), Some(content)) = (attrs.attr("name"), attrs.attr("content")) else {
            continue;
        };
        let Some(term) = meta_term(name) else {
            continue;
        };
        let content = content.trim();
        if content.is_empty() {
            continue;
        }
        let lang = attrs
            .attr("xml:lang")
            .or_else(|| attrs.attr("lang"))
            .map(str::to_string);
        if let Ok(e) = MetadataElement::new(&term, content, Source::LandingPage) {
            elements.push(e.with_language(lang));
        }
    }
    MetadataRecord::new(subject).with_elements(elements)
}

fn meta_term(name: &str) -> Option<String> {
    let lower = name.trim().to_lowercase();
    if lower.starts_with("dc.") || lower.starts_with("dcterms.") {
        Some(lower)
    } else {
        lower
            .strip_prefix("citation_")
            .filter(|rest| !rest.is_empty())
            .map(|rest| format!("citation.{rest}"))
    }
}
