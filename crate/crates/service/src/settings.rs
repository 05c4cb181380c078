//! Service configuration: a YAML document with a `service` section and an
//! optional `semantic` section, plus a separate weights document
//! (`fair-api.yaml`) with per-indicator weights and exclusions. Relative
//! paths are resolved against the directory of the file naming them.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use fair_assess_core::config::{
    all_plugin_configs_from_str, load_all_plugin_configs, DEFAULT_PLUGIN_CONFIG,
};
use fair_assess_core::harvest::transport::{ReqwestTransport, Timeouts};
use fair_assess_core::harvest::{HarvestSettings, HttpTransport, StaticTransport};
use fair_assess_core::semantic::{DEFAULT_BASE_NAMESPACE, DEFAULT_FAIR_NAMESPACE};
use fair_assess_core::{
    load_registry, plugin_from_config, Evaluator, ExecutionMode, IndicatorRegistry,
    TranslationStore,
};
use serde::{Deserialize, Serialize};

use crate::error::{AppError, ErrorClass};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceSection {
    pub host: String,
    pub port: u16,
    /// Plugin INI file; the shipped configuration when absent.
    pub plugin_config: Option<PathBuf>,
    /// Directory of `<locale>.properties` catalogs; embedded ones when absent.
    pub translations_dir: Option<PathBuf>,
    /// Weights document (`fair-api.yaml`).
    pub weights: Option<PathBuf>,
    /// Serve recorded responses from a fixture directory instead of the network.
    pub fixtures_dir: Option<PathBuf>,
    pub default_lang: String,
    pub redirect_cap: usize,
    pub max_data_probes: usize,
    pub connect_timeout_secs: u64,
    pub timeout_secs: u64,
    /// Points at or above which reports mark an indicator as passed.
    pub pass_threshold: f64,
    pub parallel: bool,
}

impl Default for ServiceSection {
    fn default() -> Self {
        Self {
            host: "127.0.0.1".into(),
            port: 9090,
            plugin_config: None,
            translations_dir: None,
            weights: None,
            fixtures_dir: None,
            default_lang: "en".into(),
            redirect_cap: 5,
            max_data_probes: 3,
            connect_timeout_secs: 10,
            timeout_secs: 30,
            pass_threshold: 75.0,
            parallel: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SemanticSection {
    pub base_namespace: String,
    pub fair_namespace: String,
}

impl Default for SemanticSection {
    fn default() -> Self {
        Self {
            base_namespace: DEFAULT_BASE_NAMESPACE.into(),
            fair_namespace: DEFAULT_FAIR_NAMESPACE.into(),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ServiceConfig {
    pub service: ServiceSection,
    pub semantic: SemanticSection,
}

/// `fair-api.yaml`: weight overrides keyed by any indicator id form, and
/// indicators left out of scoring.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsFile {
    pub weights: BTreeMap<String, f64>,
    pub exclude: Vec<String>,
}

fn config_error(msg: impl Into<String>) -> AppError {
    AppError::new(ErrorClass::Config, msg)
}

fn resolve(base: &Path, p: &mut Option<PathBuf>) {
    if let Some(path) = p {
        if path.is_relative() {
            *path = base.join(&*path);
        }
    }
}

impl ServiceConfig {
    pub fn from_yaml(text: &str, base_dir: &Path) -> Result<Self, AppError> {
        let mut cfg: Self = if text.trim().is_empty() {
            Self::default()
        } else {
            serde_yaml::from_str(text)
                .map_err(|e| config_error(format!("service configuration: {e}")))?
        };
        let s = &mut cfg.service;
        for p in [
            &mut s.plugin_config,
            &mut s.translations_dir,
            &mut s.weights,
            &mut s.fixtures_dir,
        ] {
            resolve(base_dir, p);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, AppError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        Self::from_yaml(&text, path.parent().unwrap_or(Path::new(".")))
    }

    fn validate(&self) -> Result<(), AppError> {
        let s = &self.service;
        if !(0.0..=100.0).contains(&s.pass_threshold) {
            return Err(config_error("pass_threshold must lie in [0, 100]"));
        }
        if s.timeout_secs == 0 || s.connect_timeout_secs == 0 {
            return Err(config_error("timeouts must be positive"));
        }
        fair_assess_core::semantic::normalize_namespace(&self.semantic.base_namespace)
            .and_then(|_| {
                fair_assess_core::semantic::normalize_namespace(&self.semantic.fair_namespace)
            })
            .map_err(|e| config_error(e.to_string()))?;
        Ok(())
    }

    pub fn mode(&self) -> ExecutionMode {
        if self.service.parallel {
            ExecutionMode::Parallel
        } else {
            ExecutionMode::Sequential
        }
    }

    pub fn harvest_settings(&self) -> HarvestSettings {
        let s = &self.service;
        HarvestSettings {
            timeouts: Timeouts {
                connect: Duration::from_secs(s.connect_timeout_secs),
                total: Duration::from_secs(s.timeout_secs),
            },
            redirect_cap: s.redirect_cap,
            max_data_probes: s.max_data_probes,
        }
    }

    pub fn weights(&self) -> Result<WeightsFile, AppError> {
        let Some(path) = &self.service.weights else {
            return Ok(WeightsFile::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| config_error(format!("cannot read {}: {e}", path.display())))?;
        serde_yaml::from_str(&text).map_err(|e| config_error(format!("{}: {e}", path.display())))
    }

    /// Registry with the weights document applied.
    pub fn registry(&self) -> Result<IndicatorRegistry, AppError> {
        let w = self.weights()?;
        load_registry(Some(&w.weights))
            .and_then(|r| r.with_exclusions(&w.exclude))
            .map_err(|e| config_error(format!("weights: {e}")))
    }

    pub fn transport(&self) -> Result<Arc<dyn HttpTransport>, AppError> {
        match &self.service.fixtures_dir {
            Some(dir) => StaticTransport::from_dir(dir)
                .map(|t| Arc::new(t) as Arc<dyn HttpTransport>)
                .map_err(|e| config_error(format!("fixtures: {e}"))),
            None => ReqwestTransport::new(self.harvest_settings().timeouts)
                .map(|t| Arc::new(t) as Arc<dyn HttpTransport>)
                .map_err(|e| AppError::new(ErrorClass::Network, e.to_string())),
        }
    }

    /// Builds the evaluator. Must run outside an async runtime, since the
    /// live transport owns a blocking HTTP client.
    pub fn evaluator(&self) -> Result<Evaluator, AppError> {
        let configs = match &self.service.plugin_config {
            Some(path) => load_all_plugin_configs(path),
            None => all_plugin_configs_from_str(DEFAULT_PLUGIN_CONFIG, None),
        }
        .map_err(|e| config_error(e.to_string()))?;
        let plugins = configs
            .into_iter()
            .map(plugin_from_config)
            .collect::<Result<Vec<_>, _>>()
            .map_err(|e| config_error(e.to_string()))?;
        let translations = match &self.service.translations_dir {
            Some(dir) => {
                TranslationStore::from_dir(dir).map_err(|e| config_error(e.to_string()))?
            }
            None => TranslationStore::embedded(),
        };
        Evaluator::builder(self.transport()?)
            .registry(self.registry()?)
            .plugins(plugins)
            .translations(translations)
            .settings(self.harvest_settings())
            .mode(self.mode())
            .build()
            .map_err(|e| config_error(e.to_string()))
    }
}
