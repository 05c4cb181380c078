//! Evaluation core: the plugin contract, the per-evaluation context, the
//! generic indicator tests and the orchestration of a full assessment.

pub mod context;
pub mod generic;
pub mod plugin;

use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::sync::Arc;

use chrono::{DateTime, Utc};
use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::config::{ConfigError, PluginConfig};
use crate::exec::{map_slice, ExecutionMode};
use crate::feedback::{FeedbackError, TranslationStore};
use crate::harvest::{
    resolve_identifier, HarvestSession, HarvestSettings, HttpTransport, IdentifierError,
    IdentifierRef, MetadataElement, MetadataFormat, MetadataRecord, Source, TypedLink,
};
use crate::registry::{Indicator, IndicatorId, IndicatorRegistry, PrincipleGroup, RegistryError};
use crate::scoring::{ScoreBreakdown, ScoreError};

pub use context::{AccessProbes, EndpointProbe, Harvest, HarvestFailure};
pub use plugin::{GenericPlugin, IndicatorTest, Plugin, TestFn, TestSuite};

#[derive(Debug, Error)]
pub enum EvaluationError {
    #[error("unknown plugin `{0}`")]
    UnknownPlugin(String),
    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),
    #[error("identifier is empty")]
    EmptyIdentifier,
    #[error(transparent)]
    HarvestFailure(#[from] HarvestFailure),
    #[error("invalid plugin configuration: {0}")]
    Config(#[from] ConfigError),
    #[error("registry error: {0}")]
    Registry(#[from] RegistryError),
    #[error("scoring error: {0}")]
    Scoring(#[from] ScoreError),
    #[error("feedback catalog: {0}")]
    Feedback(#[from] FeedbackError),
    #[error("duplicate plugin id `{0}`")]
    DuplicatePlugin(String),
}

impl From<IdentifierError> for EvaluationError {
    fn from(_: IdentifierError) -> Self {
        Self::EmptyIdentifier
    }
}

/// One observation a test based its verdict on.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Evidence {
    /// Metadata term or check name.
    pub check: String,
    pub observed: String,
}

/// What a test function returns; [`TestSuite::run`] turns it into a
/// [`TestResult`].
#[derive(Debug, Clone, PartialEq, Default)]
pub struct TestOutcome {
    pub points: f64,
    pub evidence: Vec<Evidence>,
    pub technical_feedback: String,
    pub tips: String,
}

impl TestOutcome {
    pub fn new(points: f64) -> Self {
        Self {
            points,
            ..Self::default()
        }
    }

    pub fn pass() -> Self {
        Self::new(100.0)
    }

    pub fn evidence(mut self, check: impl Into<String>, observed: impl Into<String>) -> Self {
        self.evidence.push(Evidence {
            check: check.into(),
            observed: observed.into(),
        });
        self
    }

    pub fn feedback(mut self, text: impl Into<String>) -> Self {
        self.technical_feedback = text.into();
        self
    }

    pub fn tip(mut self, text: impl Into<String>) -> Self {
        self.tips = text.into();
        self
    }
}

/// A test that could not produce a verdict.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("{0}")]
pub struct TestFailure(pub String);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestResult {
    pub indicator_id: IndicatorId,
    pub config_key: String,
    /// Localized indicator name; filled in by feedback rendering.
    #[serde(default)]
    pub name: String,
    pub points: f64,
    pub evidence: Vec<Evidence>,
    pub technical_feedback: String,
    pub tips: String,
    pub implementation_note: String,
    /// Locale the feedback texts were taken from.
    #[serde(default)]
    pub feedback_locale: String,
    /// True when the test errored or panicked and was scored 0.
    #[serde(default)]
    pub failed: bool,
}

/// Everything the tests of one evaluation may look at. Built once, then only
/// read (possibly from several threads).
#[derive(Debug, Clone)]
pub struct EvaluationContext {
    pub subject: IdentifierRef,
    pub metadata: MetadataRecord,
    pub landing_links: Vec<TypedLink>,
    pub oai_formats: Vec<MetadataFormat>,
    pub probes: AccessProbes,
    pub plugin_config: Arc<PluginConfig>,
    pub locale: String,
}

impl EvaluationContext {
    /// A context with no harvested evidence at all.
    pub fn empty(subject: IdentifierRef, plugin_config: Arc<PluginConfig>, locale: &str) -> Self {
        Self {
            metadata: MetadataRecord::new(subject.clone()),
            subject,
            landing_links: Vec::new(),
            oai_formats: Vec::new(),
            probes: AccessProbes::default(),
            plugin_config,
            locale: locale.to_string(),
        }
    }

    /// Filled elements whose term matches any of `patterns`, in record order.
    pub fn elements<'a>(
        &'a self,
        patterns: &'a [String],
    ) -> impl Iterator<Item = &'a MetadataElement> + 'a {
        self.metadata.elements.iter().filter(move |e| {
            e.is_filled()
                && patterns
                    .iter()
                    .any(|p| crate::harvest::term_matches(p, &e.term))
        })
    }

    pub fn has_any(&self, patterns: &[String]) -> bool {
        self.elements(patterns).next().is_some()
    }

    pub fn elements_from(&self, source: Source) -> impl Iterator<Item = &MetadataElement> + '_ {
        self.metadata
            .elements
            .iter()
            .filter(move |e| e.is_filled() && e.source == source)
    }

    pub fn links<'a>(&'a self, relation: &'a str) -> impl Iterator<Item = &'a TypedLink> + 'a {
        self.landing_links
            .iter()
            .filter(move |l| l.relation == relation)
    }

    /// Adds one element, keeping everything else unchanged.
    pub fn with_element(mut self, element: MetadataElement) -> Self {
        self.metadata.elements.push(element);
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Assessment {
    pub subject: IdentifierRef,
    pub plugin_id: String,
    pub locale: String,
    /// One result per registry indicator, keyed by canonical id, registry order.
    pub results: IndexMap<String, TestResult>,
    pub group_scores: BTreeMap<PrincipleGroup, f64>,
    pub total_score: f64,
    pub breakdown: ScoreBreakdown,
    /// Non-fatal harvesting problems (unreachable sources, protocol errors).
    pub harvest_notes: Vec<String>,
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
}

impl Assessment {
    pub fn points(&self) -> BTreeMap<String, f64> {
        self.results
            .iter()
            .map(|(k, r)| (k.clone(), r.points))
            .collect()
    }

    /// Recomputes the scores from the contained points.
    pub fn recompute(&self, registry: &IndicatorRegistry) -> Result<ScoreBreakdown, ScoreError> {
        ScoreBreakdown::compute(&self.points(), registry)
    }
}

struct PluginEntry {
    plugin: Arc<dyn Plugin>,
    registry: Arc<IndicatorRegistry>,
}

/// Runs assessments. Holds only read-only state, so one instance can serve
/// concurrent evaluations.
pub struct Evaluator {
    plugins: BTreeMap<String, PluginEntry>,
    translations: Arc<TranslationStore>,
    transport: Arc<dyn HttpTransport>,
    settings: HarvestSettings,
    mode: ExecutionMode,
}

pub struct EvaluatorBuilder {
    registry: IndicatorRegistry,
    plugins: Vec<Arc<dyn Plugin>>,
    translations: TranslationStore,
    transport: Arc<dyn HttpTransport>,
    settings: HarvestSettings,
    mode: ExecutionMode,
}

impl EvaluatorBuilder {
    /// Registry carrying the service-level weights and exclusions. Plugin
    /// overrides are applied on top of it.
    pub fn registry(mut self, registry: IndicatorRegistry) -> Self {
        self.registry = registry;
        self
    }

    pub fn plugin(mut self, plugin: Arc<dyn Plugin>) -> Self {
        self.plugins.push(plugin);
        self
    }

    pub fn plugins(mut self, plugins: impl IntoIterator<Item = Arc<dyn Plugin>>) -> Self {
        self.plugins.extend(plugins);
        self
    }

    pub fn translations(mut self, store: TranslationStore) -> Self {
        self.translations = store;
        self
    }

    pub fn settings(mut self, settings: HarvestSettings) -> Self {
        self.settings = settings;
        self
    }

    pub fn mode(mut self, mode: ExecutionMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn build(self) -> Result<Evaluator, EvaluationError> {
        let mut translations = self.translations;
        let mut plugins = BTreeMap::new();
        for plugin in self.plugins {
            let config = plugin.config();
            config.validate()?;
            let id = plugin.id().to_string();
            if plugins.contains_key(&id) {
                return Err(EvaluationError::DuplicatePlugin(id));
            }
            let registry = self
                .registry
                .clone()
                .with_weight_overrides(&config.weight_overrides)?
                .with_exclusions(&config.excluded_indicators)?;
            for (locale, text) in plugin.translations() {
                translations.add_layer_text(&id, &locale, &text)?;
            }
            if let Some(dir) = &config.translations {
                translations.add_layer_dir(&id, dir)?;
            }
            plugins.insert(
                id,
                PluginEntry {
                    plugin,
                    registry: Arc::new(registry),
                },
            );
        }
        Ok(Evaluator {
            plugins,
            translations: Arc::new(translations),
            transport: self.transport,
            settings: self.settings,
            mode: self.mode,
        })
    }
}

impl Evaluator {
    pub fn builder(transport: Arc<dyn HttpTransport>) -> EvaluatorBuilder {
        EvaluatorBuilder {
            registry: crate::registry::load_registry(None).expect("shipped registry is valid"),
            plugins: Vec::new(),
            translations: TranslationStore::embedded(),
            transport,
            settings: HarvestSettings::default(),
            mode: ExecutionMode::default(),
        }
    }

    pub fn plugin_ids(&self) -> impl Iterator<Item = &str> {
        self.plugins.keys().map(String::as_str)
    }

    pub fn plugin(&self, plugin_id: &str) -> Result<&Arc<dyn Plugin>, EvaluationError> {
        self.entry(plugin_id).map(|e| &e.plugin)
    }

    /// Registry with this plugin's weights and exclusions applied.
    pub fn registry_for(
        &self,
        plugin_id: &str,
    ) -> Result<&Arc<IndicatorRegistry>, EvaluationError> {
        self.entry(plugin_id).map(|e| &e.registry)
    }

    pub fn translations(&self) -> &TranslationStore {
        &self.translations
    }

    pub fn mode(&self) -> ExecutionMode {
        self.mode
    }

    fn entry(&self, plugin_id: &str) -> Result<&PluginEntry, EvaluationError> {
        self.plugins
            .get(plugin_id)
            .ok_or_else(|| EvaluationError::UnknownPlugin(plugin_id.to_string()))
    }

    /// Harvests metadata and probes access for `identifier` using the
    /// plugin's sources.
    pub fn assemble_context(
        &self,
        identifier: &str,
        plugin_id: &str,
        locale: &str,
    ) -> Result<(EvaluationContext, Vec<String>), EvaluationError> {
        let entry = self.entry(plugin_id)?;
        let subject = resolve_identifier(identifier)?;
        let session = HarvestSession::new(self.transport.clone(), self.settings);
        let plugin = &entry.plugin;
        let mut harvest = plugin.get_metadata(&session, &subject)?;
        let refs = plugin.get_data_refs(&harvest.record);
        harvest.probes.data = context::probe_data(&session, &refs);
        let oai_formats = harvest.record.available_formats().to_vec();
        let ctx = EvaluationContext {
            subject,
            metadata: harvest.record,
            landing_links: harvest.signposting.links,
            oai_formats,
            probes: harvest.probes,
            plugin_config: plugin.config().clone(),
            locale: locale.to_string(),
        };
        Ok((ctx, harvest.notes))
    }

    /// Full assessment: harvest, run all tests, localize, score.
    pub fn evaluate(
        &self,
        identifier: &str,
        plugin_id: &str,
        locale: &str,
    ) -> Result<Assessment, EvaluationError> {
        let started_at = Utc::now();
        let (ctx, notes) = self.assemble_context(identifier, plugin_id, locale)?;
        let mut assessment = self.evaluate_context(&ctx, plugin_id)?;
        assessment.harvest_notes = notes;
        assessment.started_at = started_at;
        Ok(assessment)
    }

    /// Runs every test of the plugin over an already assembled context.
    pub fn evaluate_context(
        &self,
        ctx: &EvaluationContext,
        plugin_id: &str,
    ) -> Result<Assessment, EvaluationError> {
        let started_at = Utc::now();
        let entry = self.entry(plugin_id)?;
        let registry = &entry.registry;
        let catalog = self.translations.catalog(Some(plugin_id), &ctx.locale);
        let tests = entry.plugin.tests();
        let results = map_slice(self.mode, registry.indicators(), |ind| {
            catalog.render(&tests.run(ind, ctx))
        });
        let results: IndexMap<String, TestResult> = results
            .into_iter()
            .map(|r| (r.indicator_id.to_string(), r))
            .collect();
        let points = results.iter().map(|(k, r)| (k.clone(), r.points)).collect();
        let breakdown = ScoreBreakdown::compute(&points, registry)?;
        Ok(Assessment {
            subject: ctx.subject.clone(),
            plugin_id: plugin_id.to_string(),
            locale: ctx.locale.clone(),
            results,
            group_scores: breakdown.per_group.clone(),
            total_score: breakdown.total,
            breakdown,
            harvest_notes: Vec::new(),
            started_at,
            finished_at: Utc::now(),
        })
    }

    /// Runs a single indicator over a freshly assembled context.
    pub fn evaluate_indicator(
        &self,
        identifier: &str,
        plugin_id: &str,
        indicator: &str,
        locale: &str,
    ) -> Result<TestResult, EvaluationError> {
        let entry = self.entry(plugin_id)?;
        let ind = entry
            .registry
            .get(indicator)
            .ok_or_else(|| EvaluationError::UnknownIndicator(indicator.to_string()))?
            .clone();
        let (ctx, _) = self.assemble_context(identifier, plugin_id, locale)?;
        let catalog = self.translations.catalog(Some(plugin_id), locale);
        Ok(catalog.render(&entry.plugin.tests().run(&ind, &ctx)))
    }
}

/// Runs one test with failure containment: errors, panics and contract
/// violations all become a 0-point result with diagnostic feedback.
pub(crate) fn run_contained(
    test: Option<&IndicatorTest>,
    indicator: &Indicator,
    ctx: &EvaluationContext,
) -> TestResult {
    let mut result = TestResult {
        indicator_id: indicator.id.clone(),
        config_key: indicator.config_key.clone(),
        name: String::new(),
        points: 0.0,
        evidence: Vec::new(),
        technical_feedback: String::new(),
        tips: String::new(),
        implementation_note: test
            .map(|t| t.implementation_note.clone())
            .unwrap_or_default(),
        feedback_locale: String::new(),
        failed: false,
    };
    let Some(test) = test else {
        result.failed = true;
        result.technical_feedback = format!("no test is registered for {}", indicator.id);
        return result;
    };
    let outcome = catch_unwind(AssertUnwindSafe(|| (test.run)(ctx)));
    let failure = match outcome {
        Ok(Ok(o)) if (0.0..=100.0).contains(&o.points) => {
            result.points = o.points;
            result.evidence = o.evidence;
            result.technical_feedback = o.technical_feedback;
            result.tips = o.tips;
            None
        }
        Ok(Ok(o)) => Some(format!(
            "test returned points outside [0, 100]: {}",
            o.points
        )),
        Ok(Err(e)) => Some(format!("test failed: {e}")),
        Err(panic) => {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unknown panic payload".into());
            Some(format!("test aborted: {msg}"))
        }
    };
    if let Some(msg) = failure {
        result.failed = true;
        result.points = 0.0;
        result.technical_feedback = msg;
    } else if result.points < 100.0 && result.technical_feedback.trim().is_empty() {
        result.technical_feedback = format!("{} is only partially satisfied", indicator.id);
    }
    result
}
