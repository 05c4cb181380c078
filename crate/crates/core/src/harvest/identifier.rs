//! Persistent identifier classification.
//!
//! A DOI is syntactically a Handle under prefix `10.`, so DOI detection runs
//! first. Resolver prefixes (`https://doi.org/`, `https://hdl.handle.net/`,
//! `doi:`, `hdl:`) are stripped into the normalized form.

use std::fmt;
use std::sync::LazyLock;

use regex::Regex;
use serde::{Deserialize, Serialize};
use thiserror::Error;

static DOI_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^10\.\d+(\.\d+)*/\S+$").unwrap());
static HANDLE_RE: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\d+(\.\d+)*/\S+$").unwrap());
static DOI_RESOLVER_RE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"(?i)^(?:https?://(?:dx\.)?doi\.org/|doi:|urn:doi:|info:doi/)").unwrap()
});
static HANDLE_RESOLVER_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^(?:https?://hdl\.handle\.net/|hdl:)").unwrap());
static URL_RE: LazyLock<Regex> =
    LazyLock::new(|| Regex::new(r"(?i)^(?:https?|ftp)://[^\s/]+").unwrap());

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IdentifierError {
    #[error("identifier is empty")]
    EmptyIdentifier,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum IdentifierKind {
    #[serde(rename = "DOI")]
    Doi,
    Handle,
    #[serde(rename = "URL")]
    Url,
    InternalId,
}

impl IdentifierKind {
    /// DOI and Handle are persistent; plain URLs are not.
    pub fn is_persistent(self) -> bool {
        matches!(self, Self::Doi | Self::Handle)
    }

    /// Anything other than an opaque internal id can be dereferenced.
    pub fn is_resolvable(self) -> bool {
        !matches!(self, Self::InternalId)
    }
}

impl fmt::Display for IdentifierKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Doi => "DOI",
            Self::Handle => "Handle",
            Self::Url => "URL",
            Self::InternalId => "InternalId",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct IdentifierRef {
    pub raw: String,
    pub kind: IdentifierKind,
    pub normalized: String,
    pub resolver_url: Option<String>,
}

pub fn resolve_identifier(raw: &str) -> Result<IdentifierRef, IdentifierError> {
    let trimmed = raw.trim();
    if trimmed.is_empty() {
        return Err(IdentifierError::EmptyIdentifier);
    }

    let (kind, normalized) = if let Some(m) = DOI_RESOLVER_RE.find(trimmed) {
        let rest = &trimmed[m.end()..];
        if DOI_RE.is_match(rest) {
            (IdentifierKind::Doi, rest.to_string())
        } else {
            classify_bare(trimmed)
        }
    } else if let Some(m) = HANDLE_RESOLVER_RE.find(trimmed) {
        let rest = &trimmed[m.end()..];
        if DOI_RE.is_match(rest) {
            (IdentifierKind::Doi, rest.to_string())
        } else if HANDLE_RE.is_match(rest) {
            (IdentifierKind::Handle, rest.to_string())
        } else {
            classify_bare(trimmed)
        }
    } else {
        classify_bare(trimmed)
    };

    let resolver_url = match kind {
        IdentifierKind::Doi => Some(format!("https://doi.org/{normalized}")),
        IdentifierKind::Handle => Some(format!("https://hdl.handle.net/{normalized}")),
        IdentifierKind::Url => Some(normalized.clone()),
        IdentifierKind::InternalId => None,
    };

    Ok(IdentifierRef {
        raw: raw.to_string(),
        kind,
        normalized,
        resolver_url,
    })
}

fn classify_bare(s: &str) -> (IdentifierKind, String) {
    if DOI_RE.is_match(s) {
        (IdentifierKind::Doi, s.to_string())
    } else if HANDLE_RE.is_match(s) {
        (IdentifierKind::Handle, s.to_string())
    } else if URL_RE.is_match(s) {
        (IdentifierKind::Url, s.to_string())
    } else {
        (IdentifierKind::InternalId, s.to_string())
    }
}
