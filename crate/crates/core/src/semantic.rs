//! SKOS description of the implemented tests as Turtle.
//!
//! Three kinds of nodes: tests (`{base}test/{plugin}/{key}`), indicators
//! (`{base}indicator/{key}`) and FAIR sub-principles (`{fair}{label}`).
//! Tests point at their indicator with `skos:closeMatch` or
//! `skos:relatedMatch`; indicators point at their sub-principle with
//! `skos:broadMatch`.

use std::fmt::Write;

use serde::{Deserialize, Serialize};
use thiserror::Error;
use url::Url;

use crate::evaluation::Plugin;
use crate::registry::{IndicatorId, IndicatorRegistry, MatchKind};

pub const DEFAULT_FAIR_NAMESPACE: &str = "https://w3id.org/fair/principles/terms/";
pub const DEFAULT_BASE_NAMESPACE: &str = "https://w3id.org/fair-assess/";

pub const SKOS: &str = "http://www.w3.org/2004/02/skos/core#";

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticError {
    #[error("invalid namespace `{0}`: expected an absolute URI")]
    InvalidNamespace(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TestDescriptor {
    pub test_uri: String,
    pub implements: String,
    pub indicator_id: String,
    pub indicator_addresses: String,
    pub relation: MatchKind,
    pub note: String,
}

impl MatchKind {
    pub fn skos_property(self) -> &'static str {
        match self {
            Self::Close => "skos:closeMatch",
            Self::Related => "skos:relatedMatch",
        }
    }
}

/// Checks and normalizes a namespace so that local names can be appended.
pub fn normalize_namespace(ns: &str) -> Result<String, SemanticError> {
    let invalid = || SemanticError::InvalidNamespace(ns.to_string());
    let trimmed = ns.trim();
    if trimmed.is_empty()
        || trimmed
            .chars()
            .any(|c| c.is_whitespace() || "<>\"{}|^`\\".contains(c))
    {
        return Err(invalid());
    }
    let url = Url::parse(trimmed).map_err(|_| invalid())?;
    if url.cannot_be_a_base() && !trimmed.ends_with(':') && !trimmed.ends_with('#') {
        return Err(invalid());
    }
    Ok(
        if trimmed.ends_with('/') || trimmed.ends_with('#') || trimmed.ends_with(':') {
            trimmed.to_string()
        } else {
            format!("{trimmed}/")
        },
    )
}

fn match_kind(plugin: &dyn Plugin, key: &str, default: MatchKind) -> MatchKind {
    let listed = |items: &[String]| {
        items.iter().any(|i| {
            i.parse::<IndicatorId>()
                .is_ok_and(|id| id.config_key() == key)
        })
    };
    let cfg = plugin.config();
    if listed(&cfg.close_match) {
        MatchKind::Close
    } else if listed(&cfg.related_match) {
        MatchKind::Related
    } else {
        default
    }
}

/// One descriptor per registry indicator, in registry order.
pub fn test_descriptors(
    registry: &IndicatorRegistry,
    plugin: &dyn Plugin,
    base_namespace: &str,
    fair_namespace: &str,
) -> Result<Vec<TestDescriptor>, SemanticError> {
    let base = normalize_namespace(base_namespace)?;
    let fair = normalize_namespace(fair_namespace)?;
    Ok(registry
        .indicators()
        .iter()
        .map(|ind| TestDescriptor {
            test_uri: format!("{base}test/{}/{}", plugin.id(), ind.config_key),
            implements: format!("{base}indicator/{}", ind.config_key),
            indicator_id: ind.id.to_string(),
            indicator_addresses: format!("{fair}{}", ind.sub_principle),
            relation: match_kind(plugin, &ind.config_key, ind.match_kind),
            note: plugin
                .tests()
                .get(&ind.config_key)
                .map(|t| t.implementation_note.clone())
                .unwrap_or_default(),
        })
        .collect())
}

fn literal(text: &str) -> String {
    let mut out = String::with_capacity(text.len() + 2);
    out.push('"');
    for c in text.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            '\r' => out.push_str("\\r"),
            '\t' => out.push_str("\\t"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// Turtle document with the default FAIR principles namespace.
pub fn export_test_graph(
    registry: &IndicatorRegistry,
    plugin: &dyn Plugin,
    base_namespace: &str,
) -> Result<String, SemanticError> {
    export_test_graph_with(registry, plugin, base_namespace, DEFAULT_FAIR_NAMESPACE)
}

pub fn export_test_graph_with(
    registry: &IndicatorRegistry,
    plugin: &dyn Plugin,
    base_namespace: &str,
    fair_namespace: &str,
) -> Result<String, SemanticError> {
    let descriptors = test_descriptors(registry, plugin, base_namespace, fair_namespace)?;
    let mut out = String::new();
    let w = &mut out;
    writeln!(w, "@prefix skos: <{SKOS}> .").unwrap();
    writeln!(w, "@prefix rdfs: <http://www.w3.org/2000/01/rdf-schema#> .").unwrap();
    writeln!(w).unwrap();

    let mut principles: Vec<(&str, &str)> = Vec::new();
    for (ind, d) in registry.indicators().iter().zip(&descriptors) {
        if !principles
            .iter()
            .any(|(uri, _)| *uri == d.indicator_addresses)
        {
            principles.push((&d.indicator_addresses, &ind.sub_principle));
        }
    }
    for (uri, label) in &principles {
        writeln!(
            w,
            "<{uri}> a skos:Concept ;\n    skos:notation {} .\n",
            literal(label)
        )
        .unwrap();
    }

    for (ind, d) in registry.indicators().iter().zip(&descriptors) {
        writeln!(w, "<{}> a skos:Concept ;", d.implements).unwrap();
        writeln!(w, "    skos:notation {} ;", literal(&d.indicator_id)).unwrap();
        writeln!(w, "    skos:prefLabel {}@en ;", literal(&ind.description)).unwrap();
        writeln!(
            w,
            "    skos:editorialNote {} ;",
            literal("Temporary identifier: RDA indicators are not yet published as semantic data.")
        )
        .unwrap();
        writeln!(w, "    skos:broadMatch <{}> .\n", d.indicator_addresses).unwrap();
    }

    for d in &descriptors {
        let key = d.implements.rsplit('/').next().unwrap_or_default();
        writeln!(w, "<{}> a skos:Concept ;", d.test_uri).unwrap();
        writeln!(
            w,
            "    rdfs:label {} ;",
            literal(&format!("{} test for {}", plugin.id(), key))
        )
        .unwrap();
        if !d.note.is_empty() {
            writeln!(w, "    skos:scopeNote {}@en ;", literal(&d.note)).unwrap();
        }
        writeln!(
            w,
            "    {} <{}> .\n",
            d.relation.skos_property(),
            d.implements
        )
        .unwrap();
    }
    Ok(out)
}
