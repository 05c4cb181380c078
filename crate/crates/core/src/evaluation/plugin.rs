//! Plugin contract and the test table every plugin carries.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::config::{ConfigError, PluginConfig};
use crate::harvest::{HarvestSession, IdentifierRef, MetadataRecord};
use crate::registry::{Indicator, IndicatorId};

use super::context::{self, Harvest, HarvestFailure};
use super::{
    generic, run_contained, EvaluationContext, EvaluationError, TestFailure, TestOutcome,
    TestResult,
};

pub type TestFn = Arc<dyn Fn(&EvaluationContext) -> Result<TestOutcome, TestFailure> + Send + Sync>;

#[derive(Clone)]
pub struct IndicatorTest {
    pub run: TestFn,
    /// What the test actually checks, in one or two sentences.
    pub implementation_note: String,
}

impl IndicatorTest {
    pub fn new<F>(note: impl Into<String>, f: F) -> Self
    where
        F: Fn(&EvaluationContext) -> Result<TestOutcome, TestFailure> + Send + Sync + 'static,
    {
        Self {
            run: Arc::new(f),
            implementation_note: note.into(),
        }
    }
}

impl fmt::Debug for IndicatorTest {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("IndicatorTest")
            .field("implementation_note", &self.implementation_note)
            .finish_non_exhaustive()
    }
}

/// Tests keyed by config key.
#[derive(Clone, Debug, Default)]
pub struct TestSuite {
    tests: BTreeMap<String, IndicatorTest>,
}

impl TestSuite {
    /// The repository-agnostic implementation of all 41 indicators.
    pub fn generic() -> Self {
        Self {
            tests: generic::generic_tests(),
        }
    }

    /// Replaces the test for `indicator` (any id form).
    pub fn with_override(
        mut self,
        indicator: &str,
        test: IndicatorTest,
    ) -> Result<Self, EvaluationError> {
        let key = indicator
            .parse::<IndicatorId>()
            .map_err(|_| EvaluationError::UnknownIndicator(indicator.to_string()))?
            .config_key();
        if !self.tests.contains_key(&key) {
            return Err(EvaluationError::UnknownIndicator(indicator.to_string()));
        }
        self.tests.insert(key, test);
        Ok(self)
    }

    pub fn get(&self, config_key: &str) -> Option<&IndicatorTest> {
        self.tests.get(config_key)
    }

    pub fn keys(&self) -> impl Iterator<Item = &str> {
        self.tests.keys().map(String::as_str)
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    /// Runs the test for `indicator`. Never fails: see the containment rules
    /// on [`TestResult::failed`].
    pub fn run(&self, indicator: &Indicator, ctx: &EvaluationContext) -> TestResult {
        run_contained(self.get(&indicator.config_key), indicator, ctx)
    }
}

/// A repository specialization of the evaluator. Every method but
/// [`Plugin::config`] and [`Plugin::tests`] has a generic default.
pub trait Plugin: Send + Sync {
    fn config(&self) -> &Arc<PluginConfig>;

    fn tests(&self) -> &TestSuite;

    fn id(&self) -> &str {
        &self.config().plugin_id
    }

    /// Harvests all configured metadata sources for `subject`.
    fn get_metadata(
        &self,
        session: &HarvestSession,
        subject: &IdentifierRef,
    ) -> Result<Harvest, HarvestFailure> {
        context::harvest_metadata(self.config(), session, subject)
    }

    /// References to the data the record describes.
    fn get_data_refs(&self, metadata: &MetadataRecord) -> Vec<IdentifierRef> {
        context::data_refs(self.config(), metadata)
    }

    /// Feedback texts layered over the base catalog, as
    /// `(locale, catalog text)` pairs.
    fn translations(&self) -> Vec<(String, String)> {
        Vec::new()
    }
}

/// Plugin that runs the generic tests against its configured sources.
#[derive(Debug, Clone)]
pub struct GenericPlugin {
    config: Arc<PluginConfig>,
    tests: TestSuite,
}

impl GenericPlugin {
    pub fn new(config: PluginConfig) -> Result<Self, ConfigError> {
        Self::with_tests(config, TestSuite::generic())
    }

    /// A generic plugin with a customized test table.
    pub fn with_tests(config: PluginConfig, tests: TestSuite) -> Result<Self, ConfigError> {
        config.validate()?;
        Ok(Self {
            config: Arc::new(config),
            tests,
        })
    }
}

impl Plugin for GenericPlugin {
    fn config(&self) -> &Arc<PluginConfig> {
        &self.config
    }

    fn tests(&self) -> &TestSuite {
        &self.tests
    }
}
