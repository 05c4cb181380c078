//! Reference plugin for an institutional DSpace-style repository.
//!
//! Seven tests are overridden with repository-specific implementation notes
//! and tips. Scoring stays the generic formula in every case, so differences
//! from the generic plugin come only from configuration and texts.

use std::sync::Arc;

use crate::config::{ConfigError, PluginConfig, PluginKind};
use crate::evaluation::generic;
use crate::evaluation::{
    EvaluationContext, GenericPlugin, IndicatorTest, Plugin, TestFailure, TestOutcome, TestSuite,
};
use crate::feedback::{parse_catalog, INSTITUTIONAL_LAYER};

/// Indicators this plugin overrides.
pub const OVERRIDDEN: [&str; 7] = [
    "rda_f1_01m",
    "rda_f1_01d",
    "rda_a1_02m",
    "rda_a1_02d",
    "rda_i1_02m",
    "rda_r1_01m",
    "rda_r1_1_01m",
];

#[derive(Debug, Clone)]
pub struct InstitutionalPlugin {
    config: Arc<PluginConfig>,
    tests: TestSuite,
}

fn english_tip(key: &str) -> String {
    let (_, text) = INSTITUTIONAL_LAYER[0];
    parse_catalog(text, "institutional/en")
        .expect("embedded layer is valid")
        .remove(&format!("{key}.tips"))
        .unwrap_or_default()
}

/// Wraps a generic test: same points and evidence, plugin tip when short of
/// full marks.
fn specialize(
    key: &'static str,
    note: String,
    base: fn(&EvaluationContext) -> Result<TestOutcome, TestFailure>,
) -> IndicatorTest {
    let tip = english_tip(key);
    IndicatorTest::new(note, move |ctx| {
        let mut out = base(ctx)?;
        if out.points < 100.0 {
            out.tips = tip.clone();
        }
        Ok(out)
    })
}

type Override = (
    &'static str,
    String,
    fn(&EvaluationContext) -> Result<TestOutcome, TestFailure>,
);

fn implementation_notes(cfg: &PluginConfig) -> [Override; 7] {
    [
        (
            "rda_f1_01m",
            format!(
                "Looks through the configured identifier terms ({}) for any identifier of the metadata.",
                cfg.identifier_terms.join(", ")
            ),
            generic::rda_f1_01m,
        ),
        (
            "rda_f1_01d",
            format!(
                "Looks through the configured data identifier terms ({}) for any identifier of the data.",
                cfg.data_identifier_terms.join(", ")
            ),
            generic::rda_f1_01d,
        ),
        (
            "rda_a1_02m",
            "Reads the metadata embedded in the landing page HTML to tell whether a person can reach it.".to_string(),
            generic::rda_a1_02m,
        ),
        (
            "rda_a1_02d",
            format!(
                "Checks for an access term ({}); {} carries additional access details when the files are not held in the repository.",
                cfg.access_terms.join(", "),
                cfg.access_info_terms.join(", ")
            ),
            generic::rda_a1_02d,
        ),
        (
            "rda_i1_02m",
            "Asks the OAI-PMH interface whether the item is disseminated in an RDF-based format.".to_string(),
            generic::rda_i1_02m,
        ),
        (
            "rda_r1_01m",
            format!(
                "Checks that the {} mandatory terms of the schema are filled (75%) and that many distinct terms are used, up to {} (25%).",
                cfg.mandatory_terms.len(),
                cfg.richness_target
            ),
            generic::rda_r1_01m,
        ),
        (
            "rda_r1_1_01m",
            format!(
                "Checks whether license information is present in any form; this repository stores it in {}.",
                cfg.license_terms.join(", ")
            ),
            generic::rda_r1_1_01m,
        ),
    ]
}

impl InstitutionalPlugin {
    pub fn new(config: PluginConfig) -> Result<Self, ConfigError> {
        config.validate()?;
        let mut tests = TestSuite::generic();
        for (key, note, base) in implementation_notes(&config) {
            tests = tests
                .with_override(key, specialize(key, note, base))
                .expect("overridden keys are registry keys");
        }
        Ok(Self {
            config: Arc::new(config),
            tests,
        })
    }
}

impl Plugin for InstitutionalPlugin {
    fn config(&self) -> &Arc<PluginConfig> {
        &self.config
    }

    fn tests(&self) -> &TestSuite {
        &self.tests
    }

    fn translations(&self) -> Vec<(String, String)> {
        INSTITUTIONAL_LAYER
            .iter()
            .map(|(l, t)| (l.to_string(), t.to_string()))
            .collect()
    }
}

/// Instantiates the plugin type named by `config.kind`.
pub fn plugin_from_config(config: PluginConfig) -> Result<Arc<dyn Plugin>, ConfigError> {
    Ok(match config.kind {
        PluginKind::Generic => Arc::new(GenericPlugin::new(config)?),
        PluginKind::Institutional => Arc::new(InstitutionalPlugin::new(config)?),
    })
}

/// All plugins of the shipped configuration file.
pub fn default_plugins() -> Result<Vec<Arc<dyn Plugin>>, ConfigError> {
    crate::config::all_plugin_configs_from_str(crate::config::DEFAULT_PLUGIN_CONFIG, None)?
        .into_iter()
        .map(plugin_from_config)
        .collect()
}
