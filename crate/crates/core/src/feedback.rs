//! Localized per-indicator texts and their merging into test results.
//!
//! Catalog files are flat `key = value` lines (UTF-8, `#` comments, `\n`
//! escapes). Keys are `<config_key>.<field>` with field `name`, `tips` or
//! `technical`. A [`TranslationStore`] holds the base catalogs per locale plus
//! optional per-plugin layers that override base entries.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::sync::LazyLock;

use thiserror::Error;

use crate::evaluation::TestResult;
use crate::registry::{load_registry, IndicatorId, IndicatorRegistry};

pub const DEFAULT_FALLBACK_LOCALE: &str = "en";
pub const CATALOG_EXTENSION: &str = "properties";

const EMBEDDED_BASE: [(&str, &str); 2] = [
    ("en", include_str!("../data/translations/en.properties")),
    ("es", include_str!("../data/translations/es.properties")),
];

/// Layer shipped with the institutional plugin.
pub const INSTITUTIONAL_LAYER: [(&str, &str); 2] = [
    (
        "en",
        include_str!("../data/translations/institutional/en.properties"),
    ),
    (
        "es",
        include_str!("../data/translations/institutional/es.properties"),
    ),
];

static KNOWN_KEYS: LazyLock<BTreeSet<String>> = LazyLock::new(|| {
    load_registry(None)
        .expect("shipped registry is valid")
        .indicators()
        .iter()
        .map(|i| i.config_key.clone())
        .collect()
});

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FeedbackError {
    #[error("no catalog for locale `{locale}` or fallback `{fallback}` in {dir}")]
    MissingLocaleFile {
        dir: PathBuf,
        locale: String,
        fallback: String,
    },
    #[error("{origin}:{line}: {message}")]
    MalformedEntry {
        origin: String,
        line: usize,
        message: String,
    },
    #[error("cannot read {path}: {message}")]
    Io { path: PathBuf, message: String },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    Name,
    Tips,
    Technical,
}

impl Field {
    pub const ALL: [Field; 3] = [Self::Name, Self::Tips, Self::Technical];

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Name => "name",
            Self::Tips => "tips",
            Self::Technical => "technical",
        }
    }
}

impl FromStr for Field {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, ()> {
        Self::ALL.into_iter().find(|f| f.as_str() == s).ok_or(())
    }
}

impl fmt::Display for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

pub type Entries = BTreeMap<String, String>;

/// Splits a catalog key into config key and field, checking both.
pub fn parse_key(key: &str) -> Result<(String, Field), String> {
    let (indicator, field) = key
        .rsplit_once('.')
        .ok_or_else(|| format!("key `{key}` is not <config_key>.<field>"))?;
    let field = field.parse::<Field>().map_err(|_| {
        format!("unknown field `{field}` in `{key}` (expected name, tips or technical)")
    })?;
    let canonical = indicator
        .parse::<IndicatorId>()
        .ok()
        .map(|id| id.config_key())
        .filter(|k| k == indicator && KNOWN_KEYS.contains(k))
        .ok_or_else(|| format!("unknown indicator key `{indicator}`"))?;
    Ok((canonical, field))
}

fn unescape(value: &str) -> String {
    let mut out = String::with_capacity(value.len());
    let mut chars = value.chars();
    while let Some(c) = chars.next() {
        if c != '\\' {
            out.push(c);
            continue;
        }
        match chars.next() {
            Some('n') => out.push('\n'),
            Some('t') => out.push('\t'),
            Some(other) => out.push(other),
            None => out.push('\\'),
        }
    }
    out
}

/// Parses one catalog file. `origin` names it in diagnostics.
pub fn parse_catalog(text: &str, origin: &str) -> Result<Entries, FeedbackError> {
    let mut entries = Entries::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') || line.starts_with('!') {
            continue;
        }
        let err = |message: String| FeedbackError::MalformedEntry {
            origin: origin.to_string(),
            line: i + 1,
            message,
        };
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| err("expected `key = value`".into()))?;
        let key = key.trim();
        parse_key(key).map_err(err)?;
        if entries
            .insert(key.to_string(), unescape(value.trim()))
            .is_some()
        {
            return Err(err(format!("duplicate key `{key}`")));
        }
    }
    Ok(entries)
}

fn read_catalog(path: &Path) -> Result<Entries, FeedbackError> {
    let text = fs::read_to_string(path).map_err(|e| FeedbackError::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })?;
    parse_catalog(&text, &path.display().to_string())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Lookup<'a> {
    pub text: &'a str,
    pub locale: &'a str,
    pub is_fallback: bool,
}

/// Texts for one locale with a fallback locale behind it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FeedbackCatalog {
    pub locale: String,
    pub fallback_locale: String,
    entries: Entries,
    fallback: Entries,
}

impl FeedbackCatalog {
    pub fn new(locale: &str, entries: Entries, fallback_locale: &str, fallback: Entries) -> Self {
        Self {
            locale: locale.to_string(),
            fallback_locale: fallback_locale.to_string(),
            entries,
            fallback,
        }
    }

    pub fn entries(&self) -> &Entries {
        &self.entries
    }

    pub fn lookup(&self, config_key: &str, field: Field) -> Option<Lookup<'_>> {
        let key = format!("{config_key}.{field}");
        if let Some(text) = self.entries.get(&key) {
            return Some(Lookup {
                text,
                locale: &self.locale,
                is_fallback: false,
            });
        }
        self.fallback.get(&key).map(|text| Lookup {
            text,
            locale: &self.fallback_locale,
            is_fallback: self.locale != self.fallback_locale,
        })
    }

    /// Registry keys without a `field` entry in this locale (fallback not
    /// consulted).
    pub fn missing(&self, registry: &IndicatorRegistry, field: Field) -> Vec<String> {
        registry
            .indicators()
            .iter()
            .map(|i| format!("{}.{field}", i.config_key))
            .filter(|k| !self.entries.contains_key(k))
            .collect()
    }

    /// Localizes `result`: the name is always set, tips only below 100 points
    /// (cleared otherwise) and technical feedback whenever it is empty.
    /// Evidence and points are untouched; applying it twice changes nothing.
    pub fn render(&self, result: &TestResult) -> TestResult {
        let mut r = result.clone();
        let key = r.config_key.clone();
        if let Some(l) = self.lookup(&key, Field::Name) {
            r.name = l.text.to_string();
        } else if r.name.is_empty() {
            r.name = r.indicator_id.to_string();
        }
        r.feedback_locale = self.locale.clone();
        if r.points < 100.0 {
            if let Some(l) = self.lookup(&key, Field::Tips) {
                r.tips = l.text.to_string();
                r.feedback_locale = l.locale.to_string();
            }
        } else {
            r.tips.clear();
        }
        if r.technical_feedback.trim().is_empty() {
            r.technical_feedback = match self.lookup(&key, Field::Technical) {
                Some(l) => l.text.to_string(),
                None if r.evidence.is_empty() => "no issues found".to_string(),
                None => r
                    .evidence
                    .iter()
                    .map(|e| format!("{}: {}", e.check, e.observed))
                    .collect::<Vec<_>>()
                    .join("; "),
            };
        }
        r
    }
}

/// Loads `<dir>/<locale>.properties` with `<dir>/en.properties` as fallback.
pub fn load_catalog(dir: &Path, locale: &str) -> Result<FeedbackCatalog, FeedbackError> {
    load_catalog_with_fallback(dir, locale, DEFAULT_FALLBACK_LOCALE)
}

pub fn load_catalog_with_fallback(
    dir: &Path,
    locale: &str,
    fallback: &str,
) -> Result<FeedbackCatalog, FeedbackError> {
    let path = |l: &str| dir.join(format!("{l}.{CATALOG_EXTENSION}"));
    let requested = path(locale);
    let fallback_path = path(fallback);
    if !requested.is_file() && !fallback_path.is_file() {
        return Err(FeedbackError::MissingLocaleFile {
            dir: dir.to_path_buf(),
            locale: locale.to_string(),
            fallback: fallback.to_string(),
        });
    }
    let entries = if requested.is_file() {
        read_catalog(&requested)?
    } else {
        Entries::new()
    };
    let fallback_entries = if fallback_path.is_file() {
        read_catalog(&fallback_path)?
    } else {
        Entries::new()
    };
    Ok(FeedbackCatalog::new(
        locale,
        entries,
        fallback,
        fallback_entries,
    ))
}

/// All catalogs known to a service: base locales plus per-plugin layers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TranslationStore {
    fallback_locale: String,
    base: BTreeMap<String, Entries>,
    layers: BTreeMap<String, BTreeMap<String, Entries>>,
}

impl TranslationStore {
    pub fn empty(fallback_locale: &str) -> Self {
        Self {
            fallback_locale: fallback_locale.to_string(),
            base: BTreeMap::new(),
            layers: BTreeMap::new(),
        }
    }

    /// The catalogs compiled into the crate (English and Spanish).
    pub fn embedded() -> Self {
        let mut store = Self::empty(DEFAULT_FALLBACK_LOCALE);
        for (locale, text) in EMBEDDED_BASE {
            store
                .add_base_text(locale, text)
                .expect("embedded catalog is valid");
        }
        store
    }

    /// Reads `<dir>/*.properties` as base catalogs; each subdirectory is a
    /// plugin layer named after the plugin id.
    pub fn from_dir(dir: &Path) -> Result<Self, FeedbackError> {
        let mut store = Self::empty(DEFAULT_FALLBACK_LOCALE);
        for (locale, path) in catalog_files(dir)? {
            store.base.insert(locale, read_catalog(&path)?);
        }
        for entry in read_dir(dir)? {
            if entry.is_dir() {
                let plugin = entry
                    .file_name()
                    .unwrap_or_default()
                    .to_string_lossy()
                    .to_string();
                store.add_layer_dir(&plugin, &entry)?;
            }
        }
        if !store.base.contains_key(&store.fallback_locale) {
            return Err(FeedbackError::MissingLocaleFile {
                dir: dir.to_path_buf(),
                locale: store.fallback_locale.clone(),
                fallback: store.fallback_locale.clone(),
            });
        }
        Ok(store)
    }

    pub fn fallback_locale(&self) -> &str {
        &self.fallback_locale
    }

    pub fn add_base_text(&mut self, locale: &str, text: &str) -> Result<(), FeedbackError> {
        let entries = parse_catalog(text, &format!("{locale}.{CATALOG_EXTENSION}"))?;
        self.base
            .entry(locale.to_string())
            .or_default()
            .extend(entries);
        Ok(())
    }

    pub fn add_layer_text(
        &mut self,
        plugin_id: &str,
        locale: &str,
        text: &str,
    ) -> Result<(), FeedbackError> {
        let entries = parse_catalog(text, &format!("{plugin_id}/{locale}.{CATALOG_EXTENSION}"))?;
        self.layers
            .entry(plugin_id.to_string())
            .or_default()
            .entry(locale.to_string())
            .or_default()
            .extend(entries);
        Ok(())
    }

    /// Adds every `<locale>.properties` in `dir` as a layer of `plugin_id`;
    /// later additions override earlier ones.
    pub fn add_layer_dir(&mut self, plugin_id: &str, dir: &Path) -> Result<(), FeedbackError> {
        for (locale, path) in catalog_files(dir)? {
            let entries = read_catalog(&path)?;
            self.layers
                .entry(plugin_id.to_string())
                .or_default()
                .entry(locale)
                .or_default()
                .extend(entries);
        }
        Ok(())
    }

    /// Base locales.
    pub fn locales(&self) -> impl Iterator<Item = &str> {
        self.base.keys().map(String::as_str)
    }

    /// Picks the stored locale for a request: exact tag, then its primary
    /// subtag (`es-ES` → `es`), then the fallback.
    pub fn resolve_locale(&self, requested: &str) -> String {
        let known =
            |l: &str| self.base.contains_key(l) || self.layers.values().any(|m| m.contains_key(l));
        let requested = requested.trim();
        if !requested.is_empty() && known(requested) {
            return requested.to_string();
        }
        let primary = requested
            .split(['-', '_'])
            .next()
            .unwrap_or_default()
            .to_ascii_lowercase();
        if !primary.is_empty() && known(&primary) {
            return primary;
        }
        self.fallback_locale.clone()
    }

    fn merged(&self, plugin_id: Option<&str>, locale: &str) -> Entries {
        let mut entries = self.base.get(locale).cloned().unwrap_or_default();
        if let Some(layer) = plugin_id
            .and_then(|p| self.layers.get(p))
            .and_then(|m| m.get(locale))
        {
            entries.extend(layer.iter().map(|(k, v)| (k.clone(), v.clone())));
        }
        entries
    }

    /// Catalog for `locale` with the plugin's layer applied on top of the base
    /// texts of each locale.
    pub fn catalog(&self, plugin_id: Option<&str>, locale: &str) -> FeedbackCatalog {
        let resolved = self.resolve_locale(locale);
        FeedbackCatalog::new(
            &resolved,
            self.merged(plugin_id, &resolved),
            &self.fallback_locale,
            self.merged(plugin_id, &self.fallback_locale),
        )
    }

    /// For every base locale, the registry keys lacking a `.tips` entry.
    pub fn completeness(&self, registry: &IndicatorRegistry) -> BTreeMap<String, Vec<String>> {
        self.base
            .keys()
            .map(|locale| {
                let catalog =
                    FeedbackCatalog::new(locale, self.merged(None, locale), locale, Entries::new());
                (locale.clone(), catalog.missing(registry, Field::Tips))
            })
            .collect()
    }
}

fn read_dir(dir: &Path) -> Result<Vec<PathBuf>, FeedbackError> {
    let io = |e: std::io::Error| FeedbackError::Io {
        path: dir.to_path_buf(),
        message: e.to_string(),
    };
    let mut paths = fs::read_dir(dir)
        .map_err(io)?
        .map(|e| e.map(|e| e.path()).map_err(io))
        .collect::<Result<Vec<_>, _>>()?;
    paths.sort();
    Ok(paths)
}

fn catalog_files(dir: &Path) -> Result<Vec<(String, PathBuf)>, FeedbackError> {
    Ok(read_dir(dir)?
        .into_iter()
        .filter(|p| p.is_file() && p.extension().is_some_and(|e| e == CATALOG_EXTENSION))
        .filter_map(|p| {
            let locale = p.file_stem()?.to_string_lossy().to_string();
            Some((locale, p))
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_comments_and_escapes() {
        let e = parse_catalog("# c\n\nrda_f1_01m.tips = a\\nb\nrda_f1_01m.name=N\n", "t").unwrap();
        assert_eq!(e["rda_f1_01m.tips"], "a\nb");
        assert_eq!(e["rda_f1_01m.name"], "N");
    }

    #[test]
    fn rejects_bad_keys_with_line() {
        let err = parse_catalog(
            "rda_f1_01m.tips = ok\nrda_bogus.tips = x\n",
            "en.properties",
        )
        .unwrap_err();
        assert_eq!(
            err,
            FeedbackError::MalformedEntry {
                origin: "en.properties".into(),
                line: 2,
                message: "unknown indicator key `rda_bogus`".into()
            }
        );
        assert!(parse_catalog("rda_f1_01m.colour = x", "t").is_err());
        assert!(parse_catalog("RDA-F1-01M.tips = x", "t").is_err());
        assert!(parse_catalog("no equals sign", "t").is_err());
        assert!(parse_catalog("rda_f1_01m.tips = a\nrda_f1_01m.tips = b", "t").is_err());
    }

    #[test]
    fn embedded_catalogs_are_complete() {
        let reg = load_registry(None).unwrap();
        let store = TranslationStore::embedded();
        for (locale, missing) in store.completeness(&reg) {
            assert!(missing.is_empty(), "{locale}: {missing:?}");
        }
        for (locale, text) in INSTITUTIONAL_LAYER {
            assert_eq!(parse_catalog(text, locale).unwrap().len(), 7);
        }
    }

    #[test]
    fn locale_resolution() {
        let store = TranslationStore::embedded();
        assert_eq!(store.resolve_locale("es-ES"), "es");
        assert_eq!(store.resolve_locale("fr"), "en");
        assert_eq!(store.resolve_locale(""), "en");
    }

    #[test]
    fn fallback_is_flagged() {
        let mut store = TranslationStore::empty("en");
        store
            .add_base_text("en", "rda_f1_01m.tips = E\nrda_f1_02m.tips = E2")
            .unwrap();
        store.add_base_text("es", "rda_f1_01m.tips = S").unwrap();
        let c = store.catalog(None, "es");
        assert_eq!(c.lookup("rda_f1_01m", Field::Tips).unwrap().text, "S");
        let l = c.lookup("rda_f1_02m", Field::Tips).unwrap();
        assert_eq!((l.text, l.is_fallback, l.locale), ("E2", true, "en"));
    }

    #[test]
    fn layers_override_base() {
        let mut store = TranslationStore::embedded();
        store
            .add_layer_text("p", "en", "rda_f1_01m.tips = layered")
            .unwrap();
        assert_eq!(
            store
                .catalog(Some("p"), "en")
                .lookup("rda_f1_01m", Field::Tips)
                .unwrap()
                .text,
            "layered"
        );
        assert_ne!(
            store
                .catalog(None, "en")
                .lookup("rda_f1_01m", Field::Tips)
                .unwrap()
                .text,
            "layered"
        );
        // requested-locale base text wins over a fallback-locale layer
        let es = store.catalog(Some("p"), "es");
        assert!(!es.lookup("rda_f1_01m", Field::Tips).unwrap().is_fallback);
    }

    #[test]
    fn missing_locale_file() {
        let dir = tempfile::tempdir().unwrap();
        assert!(matches!(
            load_catalog(dir.path(), "es"),
            Err(FeedbackError::MissingLocaleFile { .. })
        ));
        fs::write(dir.path().join("en.properties"), "rda_f1_01m.tips = x\n").unwrap();
        let c = load_catalog(dir.path(), "es").unwrap();
        assert!(c.lookup("rda_f1_01m", Field::Tips).unwrap().is_fallback);
    }
}
