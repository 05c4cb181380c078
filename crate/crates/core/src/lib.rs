//! FAIR assessment engine.
//!
//! Harvests metadata about a digital object, runs one automated test per RDA
//! FAIR Data Maturity Model indicator through a repository plugin, scores the
//! outcome with priority weights and renders localized feedback. Test
//! definitions can also be published as a SKOS/Turtle description.

pub mod config;
pub mod evaluation;
pub mod exec;
pub mod feedback;
pub mod harvest;
pub mod institutional;
pub mod registry;
pub mod scoring;
pub mod semantic;

pub use config::{PluginConfig, PluginKind};
pub use evaluation::{
    Assessment, EvaluationContext, EvaluationError, Evaluator, GenericPlugin, Plugin, TestResult,
    TestSuite,
};
pub use exec::ExecutionMode;
pub use feedback::{FeedbackCatalog, TranslationStore};
pub use institutional::{plugin_from_config, InstitutionalPlugin};
pub use registry::{
    load_registry, Indicator, IndicatorId, IndicatorRegistry, MatchKind, PrincipleGroup,
    PriorityLevel,
};
