//! Catalog of RDA FAIR indicators, their priority levels and the weights
//! used when aggregating indicator points into a score.
//!
//! The default registry is compiled in from `data/indicators.csv`. A registry
//! is immutable once built; recalibrating weights means loading a new one.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

const DEFAULT_INDICATORS: &str = include_str!("../data/indicators.csv");

/// Config-key → weight map, as read from the service weights file.
pub type WeightOverrides = BTreeMap<String, f64>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error("unknown indicator key `{0}`")]
    UnknownIndicatorKey(String),
    #[error("weight for `{key}` must be strictly positive, got {value}")]
    NonPositiveWeight { key: String, value: f64 },
    #[error("invalid indicator id `{0}`")]
    InvalidId(String),
    #[error("duplicate indicator id `{0}`")]
    DuplicateId(String),
    #[error("indicator record {line}: {message}")]
    MalformedRecord { line: usize, message: String },
}

/// One of the four FAIR principles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PrincipleGroup {
    F,
    A,
    I,
    R,
}

impl PrincipleGroup {
    pub const ALL: [PrincipleGroup; 4] = [Self::F, Self::A, Self::I, Self::R];

    pub fn letter(self) -> char {
        match self {
            Self::F => 'F',
            Self::A => 'A',
            Self::I => 'I',
            Self::R => 'R',
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Self::F => "Findable",
            Self::A => "Accessible",
            Self::I => "Interoperable",
            Self::R => "Reusable",
        }
    }

    pub fn from_letter(c: char) -> Option<Self> {
        match c.to_ascii_uppercase() {
            'F' => Some(Self::F),
            'A' => Some(Self::A),
            'I' => Some(Self::I),
            'R' => Some(Self::R),
            _ => None,
        }
    }
}

impl fmt::Display for PrincipleGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.letter())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum PriorityLevel {
    Essential,
    Important,
    Useful,
}

impl PriorityLevel {
    pub const ALL: [PriorityLevel; 3] = [Self::Essential, Self::Important, Self::Useful];

    pub fn default_weight(self) -> f64 {
        match self {
            Self::Essential => 2.0,
            Self::Important => 1.5,
            Self::Useful => 1.0,
        }
    }
}

impl fmt::Display for PriorityLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::Essential => "Essential",
            Self::Important => "Important",
            Self::Useful => "Useful",
        })
    }
}

/// Whether an indicator assesses the metadata record or the data it describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Target {
    Metadata,
    Data,
}

impl Target {
    pub fn suffix(self) -> char {
        match self {
            Self::Metadata => 'M',
            Self::Data => 'D',
        }
    }
}

/// Who is in a position to fix a failing indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Dependency {
    /// Outcome fixed by repository infrastructure (PID minting, protocols).
    RepositoryDependent,
    /// Outcome driven by the description supplied by data creators.
    MetadataDependent,
}

/// How closely the shipped test captures its indicator.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MatchKind {
    /// The test automates the indicator directly.
    Close,
    /// The test checks a proxy (e.g. configuration-declared evidence).
    Related,
}

/// Canonical indicator id, e.g. `RDA-F1-01M` or `RDA-R1.1-01M`.
///
/// Parsing accepts the dotted variant (`RDA-F1.01M`) and the config-key
/// form (`rda_r1_1_01m`); display always uses the canonical form.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndicatorId {
    group: PrincipleGroup,
    /// Numeric path under the group letter: `[1]` for F1, `[1, 1]` for R1.1.
    principle: Vec<u8>,
    number: u8,
    target: Target,
}

impl IndicatorId {
    pub fn group(&self) -> PrincipleGroup {
        self.group
    }

    pub fn target(&self) -> Target {
        self.target
    }

    /// Sub-principle label such as `F1` or `A1.1`.
    pub fn sub_principle(&self) -> String {
        let path: Vec<String> = self.principle.iter().map(u8::to_string).collect();
        format!("{}{}", self.group.letter(), path.join("."))
    }

    /// Lowercase underscore form used in configuration files, e.g. `rda_r1_1_01m`.
    pub fn config_key(&self) -> String {
        let path: Vec<String> = self.principle.iter().map(u8::to_string).collect();
        format!(
            "rda_{}{}_{:02}{}",
            self.group.letter().to_ascii_lowercase(),
            path.join("_"),
            self.number,
            self.target.suffix().to_ascii_lowercase()
        )
    }
}

impl fmt::Display for IndicatorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "RDA-{}-{:02}{}",
            self.sub_principle(),
            self.number,
            self.target.suffix()
        )
    }
}

impl FromStr for IndicatorId {
    type Err = RegistryError;

    fn from_str(raw: &str) -> Result<Self, Self::Err> {
        let invalid = || RegistryError::InvalidId(raw.to_string());
        let tokens: Vec<&str> = raw.trim().split(['-', '.', '_']).collect();
        // RDA, group+first path number, [more path numbers], number+target
        if tokens.len() < 3 || !tokens[0].eq_ignore_ascii_case("rda") {
            return Err(invalid());
        }
        let head = tokens[1];
        let mut chars = head.chars();
        let group = chars
            .next()
            .and_then(PrincipleGroup::from_letter)
            .ok_or_else(invalid)?;
        let mut principle = vec![parse_small(chars.as_str()).ok_or_else(invalid)?];
        for tok in &tokens[2..tokens.len() - 1] {
            principle.push(parse_small(tok).ok_or_else(invalid)?);
        }
        let tail = tokens[tokens.len() - 1];
        if tail.len() != 3 {
            return Err(invalid());
        }
        let number = parse_small(&tail[..2]).ok_or_else(invalid)?;
        let target = match tail.as_bytes()[2].to_ascii_uppercase() {
            b'M' => Target::Metadata,
            b'D' => Target::Data,
            _ => return Err(invalid()),
        };
        Ok(Self {
            group,
            principle,
            number,
            target,
        })
    }
}

fn parse_small(s: &str) -> Option<u8> {
    if s.is_empty() || !s.bytes().all(|b| b.is_ascii_digit()) {
        return None;
    }
    s.parse().ok()
}

impl Serialize for IndicatorId {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for IndicatorId {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let raw = String::deserialize(d)?;
        raw.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Indicator {
    pub id: IndicatorId,
    pub config_key: String,
    pub group: PrincipleGroup,
    pub sub_principle: String,
    pub target: Target,
    pub priority: PriorityLevel,
    pub dependency: Dependency,
    pub match_kind: MatchKind,
    pub description: String,
}

#[derive(Debug, Deserialize)]
struct IndicatorRecord {
    id: String,
    group: String,
    sub_principle: String,
    target: String,
    priority: String,
    dependency: String,
    #[serde(rename = "match")]
    match_kind: String,
    description: String,
}

impl IndicatorRecord {
    fn into_indicator(self, line: usize) -> Result<Indicator, RegistryError> {
        let bad = |message: String| RegistryError::MalformedRecord { line, message };
        let id: IndicatorId = self.id.parse()?;
        let group = self
            .group
            .chars()
            .next()
            .filter(|_| self.group.len() == 1)
            .and_then(PrincipleGroup::from_letter)
            .ok_or_else(|| bad(format!("bad group `{}`", self.group)))?;
        if group != id.group() {
            return Err(bad(format!("group {} disagrees with id {}", group, id)));
        }
        if self.sub_principle != id.sub_principle() {
            return Err(bad(format!(
                "sub-principle {} disagrees with id {}",
                self.sub_principle, id
            )));
        }
        let target = match self.target.as_str() {
            "M" => Target::Metadata,
            "D" => Target::Data,
            other => return Err(bad(format!("bad target `{other}`"))),
        };
        if target != id.target() {
            return Err(bad(format!("target suffix disagrees with id {id}")));
        }
        let priority = match self.priority.as_str() {
            "Essential" => PriorityLevel::Essential,
            "Important" => PriorityLevel::Important,
            "Useful" => PriorityLevel::Useful,
            other => return Err(bad(format!("bad priority `{other}`"))),
        };
        let dependency = match self.dependency.as_str() {
            "repository" => Dependency::RepositoryDependent,
            "metadata" => Dependency::MetadataDependent,
            other => return Err(bad(format!("bad dependency `{other}`"))),
        };
        let match_kind = match self.match_kind.as_str() {
            "close" => MatchKind::Close,
            "related" => MatchKind::Related,
            other => return Err(bad(format!("bad match kind `{other}`"))),
        };
        Ok(Indicator {
            config_key: id.config_key(),
            sub_principle: id.sub_principle(),
            id,
            group,
            target,
            priority,
            dependency,
            match_kind,
            description: self.description,
        })
    }
}

#[derive(Debug, Clone)]
pub struct IndicatorRegistry {
    indicators: Vec<Indicator>,
    weights: BTreeMap<String, f64>,
    excluded: BTreeSet<String>,
}

/// Builds the default 41-indicator registry, applying `weight_overrides`
/// on top of the priority defaults.
pub fn load_registry(
    weight_overrides: Option<&WeightOverrides>,
) -> Result<IndicatorRegistry, RegistryError> {
    IndicatorRegistry::from_csv(DEFAULT_INDICATORS, weight_overrides)
}

/// All indicators of `group`, in registry order.
pub fn indicators_by_group(registry: &IndicatorRegistry, group: PrincipleGroup) -> Vec<&Indicator> {
    registry.by_group(group).collect()
}

impl IndicatorRegistry {
    /// Parses a registry document (CSV with header
    /// `id,group,sub_principle,target,priority,dependency,match,description`).
    pub fn from_csv(
        text: &str,
        weight_overrides: Option<&WeightOverrides>,
    ) -> Result<Self, RegistryError> {
        let mut reader = csv::Reader::from_reader(text.as_bytes());
        let mut indicators: Vec<Indicator> = Vec::new();
        let mut seen = BTreeSet::new();
        for (i, row) in reader.deserialize::<IndicatorRecord>().enumerate() {
            let line = i + 2;
            let record = row.map_err(|e| RegistryError::MalformedRecord {
                line,
                message: e.to_string(),
            })?;
            let indicator = record.into_indicator(line)?;
            if !seen.insert(indicator.config_key.clone()) {
                return Err(RegistryError::DuplicateId(indicator.id.to_string()));
            }
            indicators.push(indicator);
        }
        Self::new(indicators, weight_overrides)
    }

    pub fn new(
        indicators: Vec<Indicator>,
        weight_overrides: Option<&WeightOverrides>,
    ) -> Result<Self, RegistryError> {
        let mut weights: BTreeMap<String, f64> = indicators
            .iter()
            .map(|ind| (ind.config_key.clone(), ind.priority.default_weight()))
            .collect();
        if weights.len() != indicators.len() {
            let mut seen = BTreeSet::new();
            let dup = indicators
                .iter()
                .find(|ind| !seen.insert(&ind.config_key))
                .map(|ind| ind.id.to_string())
                .unwrap_or_default();
            return Err(RegistryError::DuplicateId(dup));
        }
        for (raw_key, &value) in weight_overrides.into_iter().flatten() {
            let key = normalize_key(raw_key)
                .filter(|k| weights.contains_key(k))
                .ok_or_else(|| RegistryError::UnknownIndicatorKey(raw_key.clone()))?;
            if !value.is_finite() || value <= 0.0 {
                return Err(RegistryError::NonPositiveWeight { key, value });
            }
            weights.insert(key, value);
        }
        Ok(Self {
            indicators,
            weights,
            excluded: BTreeSet::new(),
        })
    }

    /// Marks indicators as not assessed: they still run but are left out of
    /// both numerator and denominator of every score.
    pub fn with_exclusions<I, S>(mut self, keys: I) -> Result<Self, RegistryError>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        for raw in keys {
            let raw = raw.as_ref();
            let key = normalize_key(raw)
                .filter(|k| self.weights.contains_key(k))
                .ok_or_else(|| RegistryError::UnknownIndicatorKey(raw.to_string()))?;
            self.excluded.insert(key);
        }
        Ok(self)
    }

    /// Applies further weight overrides on top of the current weights.
    pub fn with_weight_overrides(
        mut self,
        overrides: &WeightOverrides,
    ) -> Result<Self, RegistryError> {
        for (raw_key, &value) in overrides {
            let key = normalize_key(raw_key)
                .filter(|k| self.weights.contains_key(k))
                .ok_or_else(|| RegistryError::UnknownIndicatorKey(raw_key.clone()))?;
            if !value.is_finite() || value <= 0.0 {
                return Err(RegistryError::NonPositiveWeight { key, value });
            }
            self.weights.insert(key, value);
        }
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.indicators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.indicators.is_empty()
    }

    pub fn indicators(&self) -> &[Indicator] {
        &self.indicators
    }

    pub fn by_group(&self, group: PrincipleGroup) -> impl Iterator<Item = &Indicator> + '_ {
        self.indicators.iter().filter(move |ind| ind.group == group)
    }

    /// Looks up an indicator by canonical id, dotted id or config key.
    pub fn get(&self, key: &str) -> Option<&Indicator> {
        let key = normalize_key(key)?;
        self.indicators.iter().find(|ind| ind.config_key == key)
    }

    pub fn weight(&self, config_key: &str) -> Option<f64> {
        self.weights.get(config_key).copied()
    }

    pub fn weights(&self) -> &BTreeMap<String, f64> {
        &self.weights
    }

    pub fn is_excluded(&self, config_key: &str) -> bool {
        self.excluded.contains(config_key)
    }

    pub fn excluded(&self) -> &BTreeSet<String> {
        &self.excluded
    }

    pub fn classify_dependency(&self, key: &str) -> Result<Dependency, RegistryError> {
        self.get(key)
            .map(|ind| ind.dependency)
            .ok_or_else(|| RegistryError::UnknownIndicatorKey(key.to_string()))
    }

    /// Priority histogram of one group: (Essential, Important, Useful).
    pub fn priority_counts(&self, group: PrincipleGroup) -> (usize, usize, usize) {
        self.by_group(group)
            .fold((0, 0, 0), |(e, i, u), ind| match ind.priority {
                PriorityLevel::Essential => (e + 1, i, u),
                PriorityLevel::Important => (e, i + 1, u),
                PriorityLevel::Useful => (e, i, u + 1),
            })
    }
}

fn normalize_key(raw: &str) -> Option<String> {
    raw.parse::<IndicatorId>().ok().map(|id| id.config_key())
}

/// Returns the partition label of `indicator_id`.
pub fn classify_indicator_dependency(
    registry: &IndicatorRegistry,
    indicator_id: &str,
) -> Result<Dependency, RegistryError> {
    registry.classify_dependency(indicator_id)
}
