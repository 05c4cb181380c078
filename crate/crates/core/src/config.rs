//! Repository-specific calibration read from an INI-style plugin
//! configuration file: one `[section]` per plugin id, list values
//! comma-separated.
//!
//! ```ini
//! [institutional]
//! plugin = institutional
//! oai_endpoint = https://digital.csic.es/dspace-oai/request
//! landing_url_template = https://digital.csic.es/handle/{id}
//! identifier_term = dc.identifier.uri, dc.identifier.doi
//! ```

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use ini::{Ini, ParseOption, Properties};
use serde::Serialize;
use thiserror::Error;
use url::Url;

use crate::registry::WeightOverrides;

pub const ID_PLACEHOLDER: &str = "{id}";
pub const HOST_PLACEHOLDER: &str = "{host}";

pub const DEFAULT_PLUGIN_CONFIG: &str = include_str!("../data/config.ini");

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ConfigError {
    #[error("cannot read plugin configuration {path}: {message}")]
    Io { path: String, message: String },
    #[error("plugin configuration is not valid INI: {0}")]
    Syntax(String),
    #[error("no [{0}] section in plugin configuration")]
    MissingSection(String),
    #[error("[{section}] {key}: {message}")]
    MalformedValue {
        section: String,
        key: String,
        message: String,
    },
    #[error("[{section}] invalid configuration: {message}")]
    ValidationError { section: String, message: String },
}

/// Which test suite a configured plugin runs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum PluginKind {
    Generic,
    Institutional,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PluginConfig {
    pub plugin_id: String,
    pub kind: PluginKind,
    pub oai_endpoint: String,
    /// OAI item identifier built from the object identifier, e.g. `oai:{host}:{id}`.
    pub oai_identifier_template: String,
    pub landing_url_template: String,
    /// Preferred OAI metadata prefixes, most qualified first.
    pub metadata_prefixes: Vec<String>,
    pub identifier_terms: Vec<String>,
    pub data_identifier_terms: Vec<String>,
    pub access_terms: Vec<String>,
    pub access_info_terms: Vec<String>,
    pub license_terms: Vec<String>,
    pub relation_terms: Vec<String>,
    pub mandatory_terms: Vec<String>,
    pub discovery_terms: Vec<String>,
    pub provenance_terms: Vec<String>,
    pub format_terms: Vec<String>,
    pub vocabulary_url_patterns: Vec<String>,
    pub standard_vocabularies: Vec<String>,
    pub rdf_format_prefixes: Vec<String>,
    pub rdf_namespaces: Vec<String>,
    pub community_standards: Vec<String>,
    pub standard_licenses: Vec<String>,
    pub machine_readable_formats: Vec<String>,
    pub richness_target: usize,
    pub preservation_policy_url: Option<String>,
    /// Optional repository-native API returning a JSON metadata document.
    pub repository_api_template: Option<String>,
    pub weight_overrides: WeightOverrides,
    pub excluded_indicators: Vec<String>,
    /// Config keys whose tests only check a proxy of the indicator.
    pub related_match: Vec<String>,
    /// Config keys whose tests automate the indicator directly.
    pub close_match: Vec<String>,
    /// Plugin-specific feedback texts layered over the shared catalog.
    pub translations: Option<PathBuf>,
}

fn list(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

impl PluginConfig {
    /// A configuration with every default applied. Call [`Self::validate`]
    /// after filling in endpoints.
    pub fn new(plugin_id: &str, oai_endpoint: &str, landing_url_template: &str) -> Self {
        Self {
            plugin_id: plugin_id.to_string(),
            kind: PluginKind::Generic,
            oai_endpoint: oai_endpoint.to_string(),
            oai_identifier_template: format!("oai:{HOST_PLACEHOLDER}:{ID_PLACEHOLDER}"),
            landing_url_template: landing_url_template.to_string(),
            metadata_prefixes: list(&["oai_dc"]),
            identifier_terms: list(&["dc.identifier.uri", "dc.identifier.doi"]),
            data_identifier_terms: list(&[
                "dc.identifier.uri",
                "dc.identifier.doi",
                "dc.relation.publisherversion",
            ]),
            access_terms: list(&["dc.rights"]),
            access_info_terms: list(&["dc.description"]),
            license_terms: list(&["dc.rights.license"]),
            relation_terms: list(&["dc.relation.*"]),
            mandatory_terms: list(&[
                "dc.contributor.author",
                "dc.title",
                "dc.date.issued",
                "dc.type",
                "dc.identifier.uri",
                "dc.rights",
                "dc.language.iso",
            ]),
            discovery_terms: list(&[
                "dc.title",
                "dc.contributor.author",
                "dc.date.issued",
                "dc.subject",
                "dc.description.abstract",
            ]),
            provenance_terms: list(&["dc.description.provenance", "dc.contributor"]),
            format_terms: list(&["dc.format", "dc.format.mimetype"]),
            vocabulary_url_patterns: list(&[
                "http://vocab.getty.edu/",
                "http://vocabularies.unesco.org/",
                "http://id.loc.gov/",
                "http://aims.fao.org/aos/agrovoc/",
                "http://purl.org/coar/",
                "http://publications.europa.eu/resource/authority/",
                "http://id.nlm.nih.gov/mesh/",
                "http://www.wikidata.org/entity/",
                "https://www.wikidata.org/wiki/",
                "https://orcid.org/",
                "https://ror.org/",
                "http://sws.geonames.org/",
            ]),
            standard_vocabularies: list(&[
                "http://vocab.getty.edu/",
                "http://vocabularies.unesco.org/",
                "http://id.loc.gov/",
                "http://aims.fao.org/aos/agrovoc/",
                "http://purl.org/coar/",
                "http://publications.europa.eu/resource/authority/",
                "http://id.nlm.nih.gov/mesh/",
            ]),
            rdf_format_prefixes: list(&["rdf", "oai_openaire", "datacite"]),
            rdf_namespaces: list(&[
                "http://www.w3.org/1999/02/22-rdf-syntax-ns#",
                "http://www.openarchives.org/OAI/2.0/rdf/",
            ]),
            community_standards: list(&[
                "http://www.openarchives.org/OAI/2.0/oai_dc/",
                "http://purl.org/dc/",
                "http://datacite.org/schema/",
                "http://namespace.openaire.eu/schema/oaire/",
                "http://www.loc.gov/MARC21/slim",
                "http://www.loc.gov/mods/",
                "ddi:codebook:2_5",
                "http://rs.tdwg.org/dwc/",
                "https://eml.ecoinformatics.org/",
            ]),
            standard_licenses: list(&[
                "https://creativecommons.org/licenses/",
                "https://creativecommons.org/publicdomain/",
                "https://opensource.org/licenses/",
                "https://opendatacommons.org/licenses/",
                "https://spdx.org/licenses/",
            ]),
            machine_readable_formats: list(&[
                "application/rdf+xml",
                "text/turtle",
                "application/ld+json",
                "application/json",
                "application/xml",
                "text/xml",
                "text/csv",
                "application/x-netcdf",
                "application/x-hdf5",
            ]),
            richness_target: 20,
            preservation_policy_url: None,
            repository_api_template: None,
            weight_overrides: WeightOverrides::new(),
            excluded_indicators: Vec::new(),
            related_match: Vec::new(),
            close_match: Vec::new(),
            translations: None,
        }
    }

    /// OAI identifier of an object, e.g. `oai:digital.csic.es:10261/172425`.
    pub fn oai_identifier(&self, normalized_id: &str) -> String {
        let host = Url::parse(&self.oai_endpoint)
            .ok()
            .and_then(|u| u.host_str().map(str::to_string))
            .unwrap_or_default();
        self.oai_identifier_template
            .replace(HOST_PLACEHOLDER, &host)
            .replace(ID_PLACEHOLDER, normalized_id)
    }

    pub fn landing_url(&self, normalized_id: &str) -> String {
        self.landing_url_template
            .replace(ID_PLACEHOLDER, normalized_id)
    }

    pub fn repository_api_url(&self, normalized_id: &str) -> Option<String> {
        self.repository_api_template
            .as_ref()
            .map(|t| t.replace(ID_PLACEHOLDER, normalized_id))
    }

    pub fn validate(&self) -> Result<(), ConfigError> {
        let fail = |message: String| {
            Err(ConfigError::ValidationError {
                section: self.plugin_id.clone(),
                message,
            })
        };
        if self.plugin_id.is_empty()
            || !self
                .plugin_id
                .bytes()
                .all(|b| b.is_ascii_alphanumeric() || matches!(b, b'-' | b'_' | b'.'))
        {
            return fail(format!(
                "plugin id `{}` must be [A-Za-z0-9._-]+",
                self.plugin_id
            ));
        }
        if !is_http_url(&self.oai_endpoint) {
            return fail(format!(
                "oai_endpoint `{}` is not an http(s) URL",
                self.oai_endpoint
            ));
        }
        if self.landing_url_template.matches(ID_PLACEHOLDER).count() != 1 {
            return fail("landing_url_template must contain exactly one {id} placeholder".into());
        }
        if !is_http_url(&self.landing_url("x")) {
            return fail("landing_url_template does not produce an http(s) URL".into());
        }
        if !self.oai_identifier_template.contains(ID_PLACEHOLDER) {
            return fail("oai_identifier_template must contain {id}".into());
        }
        if let Some(t) = &self.repository_api_template {
            if t.matches(ID_PLACEHOLDER).count() != 1
                || !is_http_url(&t.replace(ID_PLACEHOLDER, "x"))
            {
                return fail("repository_api_template must be an http(s) URL with one {id}".into());
            }
        }
        if let Some(u) = &self.preservation_policy_url {
            if !is_http_url(u) {
                return fail(format!(
                    "preservation_policy_url `{u}` is not an http(s) URL"
                ));
            }
        }
        let required: [(&str, &Vec<String>); 7] = [
            ("identifier_terms", &self.identifier_terms),
            ("data_identifier_terms", &self.data_identifier_terms),
            ("access_terms", &self.access_terms),
            ("license_terms", &self.license_terms),
            ("relation_terms", &self.relation_terms),
            ("mandatory_terms", &self.mandatory_terms),
            ("metadata_prefixes", &self.metadata_prefixes),
        ];
        for (name, values) in required {
            if values.is_empty() {
                return fail(format!("{name} must not be empty"));
            }
        }
        if self.richness_target == 0 {
            return fail("richness_target must be positive".into());
        }
        Ok(())
    }
}

fn is_http_url(s: &str) -> bool {
    Url::parse(s).is_ok_and(|u| matches!(u.scheme(), "http" | "https") && u.has_host())
}

fn parse_options() -> ParseOption {
    ParseOption {
        enabled_quote: false,
        enabled_escape: false,
        ..ParseOption::default()
    }
}

fn parse_ini(text: &str) -> Result<Ini, ConfigError> {
    Ini::load_from_str_opt(text, parse_options()).map_err(|e| ConfigError::Syntax(e.to_string()))
}

/// Reads the `[plugin_id]` section of the INI file at `path`.
pub fn load_plugin_config(path: &Path, plugin_id: &str) -> Result<PluginConfig, ConfigError> {
    let text = read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    plugin_config_from_str(&text, plugin_id, Some(base))
}

/// Reads every section of the INI file at `path`.
pub fn load_all_plugin_configs(path: &Path) -> Result<Vec<PluginConfig>, ConfigError> {
    let text = read(path)?;
    let base = path.parent().unwrap_or(Path::new("."));
    all_plugin_configs_from_str(&text, Some(base))
}

fn read(path: &Path) -> Result<String, ConfigError> {
    std::fs::read_to_string(path).map_err(|e| ConfigError::Io {
        path: path.display().to_string(),
        message: e.to_string(),
    })
}

pub fn all_plugin_configs_from_str(
    text: &str,
    base_dir: Option<&Path>,
) -> Result<Vec<PluginConfig>, ConfigError> {
    let ini = parse_ini(text)?;
    ini.iter()
        .filter_map(|(name, props)| name.map(|n| (n, props)))
        .map(|(name, props)| from_section(name, props, base_dir))
        .collect()
}

/// `base_dir` resolves relative `translations` paths.
pub fn plugin_config_from_str(
    text: &str,
    plugin_id: &str,
    base_dir: Option<&Path>,
) -> Result<PluginConfig, ConfigError> {
    let ini = parse_ini(text)?;
    let props = ini
        .section(Some(plugin_id))
        .ok_or_else(|| ConfigError::MissingSection(plugin_id.to_string()))?;
    from_section(plugin_id, props, base_dir)
}

struct Section<'a> {
    name: &'a str,
    props: &'a Properties,
}

impl Section<'_> {
    /// Looks up the canonical key and then its aliases.
    fn raw(&self, keys: &[&str]) -> Option<&str> {
        keys.iter().find_map(|k| self.props.get(*k)).map(str::trim)
    }

    fn list(&self, keys: &[&str], target: &mut Vec<String>) -> Result<(), ConfigError> {
        if let Some(raw) = self.raw(keys) {
            let values: Vec<String> = raw
                .split(',')
                .map(|s| s.trim().to_string())
                .filter(|s| !s.is_empty())
                .collect();
            if let Some(bad) = values.iter().find(|v| v.chars().any(char::is_whitespace)) {
                return Err(
                    self.malformed(keys[0], format!("list item `{bad}` contains whitespace"))
                );
            }
            *target = values;
        }
        Ok(())
    }

    fn term_list(&self, keys: &[&str], target: &mut Vec<String>) -> Result<(), ConfigError> {
        self.list(keys, target)?;
        for t in target.iter_mut() {
            *t = t.to_lowercase();
        }
        Ok(())
    }

    fn malformed(&self, key: &str, message: String) -> ConfigError {
        ConfigError::MalformedValue {
            section: self.name.to_string(),
            key: key.to_string(),
            message,
        }
    }
}

fn from_section(
    name: &str,
    props: &Properties,
    base_dir: Option<&Path>,
) -> Result<PluginConfig, ConfigError> {
    let s = Section { name, props };
    let missing = |key: &str| ConfigError::ValidationError {
        section: name.to_string(),
        message: format!("missing required key `{key}`"),
    };
    let oai_endpoint = s
        .raw(&["oai_endpoint"])
        .ok_or_else(|| missing("oai_endpoint"))?;
    let landing = s
        .raw(&["landing_url_template"])
        .ok_or_else(|| missing("landing_url_template"))?;
    let mut c = PluginConfig::new(name, oai_endpoint, landing);

    if let Some(kind) = s.raw(&["plugin", "kind"]) {
        c.kind = match kind {
            "generic" | "oai-pmh" => PluginKind::Generic,
            "institutional" | "dspace" => PluginKind::Institutional,
            other => return Err(s.malformed("plugin", format!("unknown plugin kind `{other}`"))),
        };
    }
    if let Some(t) = s.raw(&["oai_identifier_template"]) {
        c.oai_identifier_template = t.to_string();
    }
    s.list(
        &["metadata_prefixes", "metadata_prefix"],
        &mut c.metadata_prefixes,
    )?;
    s.term_list(
        &["identifier_terms", "identifier_term"],
        &mut c.identifier_terms,
    )?;
    s.term_list(
        &["data_identifier_terms", "data_identifier_term"],
        &mut c.data_identifier_terms,
    )?;
    s.term_list(&["access_terms", "access_term"], &mut c.access_terms)?;
    s.term_list(
        &["access_info_terms", "access_info_term"],
        &mut c.access_info_terms,
    )?;
    s.term_list(&["license_terms", "license_term"], &mut c.license_terms)?;
    s.term_list(&["relation_terms", "relation_term"], &mut c.relation_terms)?;
    s.term_list(
        &["mandatory_terms", "mandatory_term"],
        &mut c.mandatory_terms,
    )?;
    s.term_list(
        &["discovery_terms", "discovery_term"],
        &mut c.discovery_terms,
    )?;
    s.term_list(
        &["provenance_terms", "provenance_term"],
        &mut c.provenance_terms,
    )?;
    s.term_list(&["format_terms", "format_term"], &mut c.format_terms)?;
    s.list(&["vocabulary_url_patterns"], &mut c.vocabulary_url_patterns)?;
    s.list(&["standard_vocabularies"], &mut c.standard_vocabularies)?;
    s.list(&["rdf_format_prefixes"], &mut c.rdf_format_prefixes)?;
    s.list(&["rdf_namespaces"], &mut c.rdf_namespaces)?;
    s.list(&["community_standards"], &mut c.community_standards)?;
    s.list(&["standard_licenses"], &mut c.standard_licenses)?;
    s.list(
        &["machine_readable_formats"],
        &mut c.machine_readable_formats,
    )?;
    s.list(&["excluded_indicators"], &mut c.excluded_indicators)?;
    s.list(&["related_match"], &mut c.related_match)?;
    s.list(&["close_match"], &mut c.close_match)?;

    if let Some(raw) = s.raw(&["richness_target"]) {
        c.richness_target = raw.parse().map_err(|_| {
            s.malformed(
                "richness_target",
                format!("`{raw}` is not a positive integer"),
            )
        })?;
    }
    c.preservation_policy_url = s
        .raw(&["preservation_policy_url"])
        .filter(|v| !v.is_empty())
        .map(str::to_string);
    c.repository_api_template = s
        .raw(&["repository_api_template"])
        .filter(|v| !v.is_empty())
        .map(str::to_string);
    if let Some(raw) = s.raw(&["weight_overrides"]) {
        c.weight_overrides = parse_weights(raw).map_err(|m| s.malformed("weight_overrides", m))?;
    }
    if let Some(raw) = s.raw(&["translations"]).filter(|v| !v.is_empty()) {
        let p = PathBuf::from(raw);
        c.translations = Some(match base_dir {
            Some(base) if p.is_relative() => base.join(p),
            _ => p,
        });
    }
    c.validate()?;
    Ok(c)
}

fn parse_weights(raw: &str) -> Result<WeightOverrides, String> {
    let mut out = BTreeMap::new();
    for item in raw.split(',').map(str::trim).filter(|s| !s.is_empty()) {
        let (key, value) = item
            .split_once(':')
            .ok_or_else(|| format!("`{item}` is not key:weight"))?;
        let value: f64 = value
            .trim()
            .parse()
            .map_err(|_| format!("`{}` is not a number", value.trim()))?;
        out.insert(key.trim().to_string(), value);
    }
    Ok(out)
}
