#![allow(dead_code)]

use std::path::PathBuf;
use std::sync::Arc;

use fair_assess_core::config::load_all_plugin_configs;
use fair_assess_core::harvest::StaticTransport;
use fair_assess_core::{plugin_from_config, Evaluator, ExecutionMode};

pub const RICH: &str = "10261/900001";
pub const MINIMAL: &str = "10261/900002";
pub const UNREACHABLE: &str = "10261/900003";

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn oai_fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures().join("oai").join(name)).unwrap()
}

pub fn repository_dir() -> PathBuf {
    fixtures().join("repository")
}

pub fn transport() -> Arc<StaticTransport> {
    Arc::new(StaticTransport::from_dir(&repository_dir()).unwrap())
}

/// Evaluator over the recorded repository, with both fixture plugins.
pub fn evaluator(mode: ExecutionMode) -> Evaluator {
    let configs = load_all_plugin_configs(&repository_dir().join("config.ini")).unwrap();
    let plugins = configs.into_iter().map(|c| plugin_from_config(c).unwrap());
    Evaluator::builder(transport())
        .plugins(plugins)
        .mode(mode)
        .build()
        .unwrap()
}
