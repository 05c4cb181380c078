//! Metadata harvesting: OAI-PMH, landing pages, Signposting and the
//! identifier classification they all rely on.

pub mod identifier;
pub mod landing;
pub mod oai;
pub mod session;
pub mod signposting;
pub mod transport;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use identifier::{resolve_identifier, IdentifierError, IdentifierKind, IdentifierRef};
pub use landing::{extract_embedded_metadata, fetch_landing_page, LandingPage};
pub use oai::{
    oai_get_record, oai_identify, oai_list_metadata_formats, OaiErrorCode, RepositoryDescriptor,
};
pub use session::{HarvestSession, HarvestSettings};
pub use signposting::{parse_link_header, parse_signposting, Signposting, TypedLink};
pub use transport::{HttpResponse, HttpTransport, StaticTransport};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HarvestError {
    #[error("network error: {0}")]
    Network(String),
    #[error("HTTP status {status} from {url}")]
    Http { status: u16, url: String },
    #[error("redirect loop or more than {cap} redirects starting at {url}")]
    RedirectLoop { cap: usize, url: String },
    #[error("OAI-PMH error {code}: {message}")]
    Protocol { code: OaiErrorCode, message: String },
    #[error("malformed response: {0}")]
    Parse(String),
    #[error("invalid URL `{0}`")]
    InvalidUrl(String),
}

/// Where a metadata element came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    OaiPmh,
    LandingPage,
    RepositoryApi,
    Signposting,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("invalid metadata term `{0}`")]
pub struct InvalidTerm(pub String);

/// One harvested metadata value under a dotted, lowercase term such as
/// `dc.identifier.uri`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetadataElement {
    pub term: String,
    pub value: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    pub source: Source,
}

impl MetadataElement {
    /// Normalizes the term (trimmed, lowercased) and rejects empty terms or
    /// empty dot-separated segments.
    pub fn new(term: &str, value: impl Into<String>, source: Source) -> Result<Self, InvalidTerm> {
        let term = normalize_term(term).ok_or_else(|| InvalidTerm(term.to_string()))?;
        Ok(Self {
            term,
            value: value.into(),
            language: None,
            source,
        })
    }

    pub fn with_language(mut self, language: Option<String>) -> Self {
        self.language = language.filter(|l| !l.trim().is_empty());
        self
    }

    pub fn is_filled(&self) -> bool {
        !self.value.trim().is_empty()
    }
}

fn normalize_term(raw: &str) -> Option<String> {
    let term = raw.trim().to_lowercase();
    let ok = !term.is_empty()
        && term
            .split('.')
            .all(|seg| !seg.is_empty() && !seg.chars().any(char::is_whitespace));
    ok.then_some(term)
}

/// A metadata format an OAI-PMH repository can disseminate.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct MetadataFormat {
    pub prefix: String,
    pub schema: String,
    pub namespace: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetadataRecord {
    pub subject: IdentifierRef,
    pub elements: Vec<MetadataElement>,
    available_formats: Vec<MetadataFormat>,
    pub harvested_at: DateTime<Utc>,
}

impl MetadataRecord {
    pub fn new(subject: IdentifierRef) -> Self {
        Self {
            subject,
            elements: Vec::new(),
            available_formats: Vec::new(),
            harvested_at: Utc::now(),
        }
    }

    pub fn with_elements(mut self, elements: Vec<MetadataElement>) -> Self {
        self.elements = elements;
        self
    }

    pub fn available_formats(&self) -> &[MetadataFormat] {
        &self.available_formats
    }

    /// Adds formats, keeping the first descriptor seen for each prefix.
    pub fn add_formats(&mut self, formats: impl IntoIterator<Item = MetadataFormat>) {
        for f in formats {
            if !self.available_formats.iter().any(|x| x.prefix == f.prefix) {
                self.available_formats.push(f);
            }
        }
    }

    /// Values of elements whose term matches `pattern` (see [`term_matches`]).
    pub fn values<'a>(
        &'a self,
        pattern: &'a str,
    ) -> impl Iterator<Item = &'a MetadataElement> + 'a {
        self.elements
            .iter()
            .filter(move |e| e.is_filled() && term_matches(pattern, &e.term))
    }

    pub fn has(&self, pattern: &str) -> bool {
        self.values(pattern).next().is_some()
    }
}

/// Configured term patterns match exactly, except that a trailing `.*`
/// matches the base term and any qualified form of it
/// (`dc.relation.*` matches `dc.relation` and `dc.relation.ispartof`).
pub fn term_matches(pattern: &str, term: &str) -> bool {
    match pattern.strip_suffix(".*") {
        Some(base) => {
            term == base
                || (term.len() > base.len()
                    && term.starts_with(base)
                    && term.as_bytes()[base.len()] == b'.')
        }
        None => pattern == term,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn term_normalization() {
        let e = MetadataElement::new(" DC.Title ", "x", Source::LandingPage).unwrap();
        assert_eq!(e.term, "dc.title");
        assert!(MetadataElement::new("", "x", Source::OaiPmh).is_err());
        assert!(MetadataElement::new("dc..title", "x", Source::OaiPmh).is_err());
        assert!(MetadataElement::new("dc.", "x", Source::OaiPmh).is_err());
    }

    #[test]
    fn patterns() {
        assert!(term_matches("dc.rights", "dc.rights"));
        assert!(!term_matches("dc.rights", "dc.rights.license"));
        assert!(term_matches("dc.relation.*", "dc.relation"));
        assert!(term_matches("dc.relation.*", "dc.relation.ispartof"));
        assert!(!term_matches("dc.relation.*", "dc.relationship"));
    }

    #[test]
    fn formats_keep_unique_prefixes() {
        let subject = resolve_identifier("10261/1").unwrap();
        let mut rec = MetadataRecord::new(subject);
        let f = |p: &str, s: &str| MetadataFormat {
            prefix: p.into(),
            schema: s.into(),
            namespace: String::new(),
        };
        rec.add_formats([f("oai_dc", "a"), f("rdf", "b"), f("oai_dc", "c")]);
        assert_eq!(rec.available_formats().len(), 2);
        assert_eq!(rec.available_formats()[0].schema, "a");
    }
}
