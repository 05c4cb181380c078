//! Wire format of an assessment, shared by the HTTP API and CLI reports.

use std::collections::BTreeMap;

use chrono::{DateTime, Utc};
use fair_assess_core::evaluation::Evidence;
use fair_assess_core::registry::Dependency;
use fair_assess_core::{Assessment, IndicatorRegistry, PriorityLevel, TestResult};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorBlock {
    pub id: String,
    pub config_key: String,
    pub name: String,
    pub group: String,
    pub sub_principle: String,
    pub indicator_level: PriorityLevel,
    pub weight: f64,
    pub excluded: bool,
    pub points: f64,
    pub passed: bool,
    pub technical_implementation: String,
    pub technical_feedback: String,
    pub tips: String,
    pub evidence: Vec<Evidence>,
    pub dependency: Dependency,
    pub feedback_locale: String,
    pub failed: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub started_at: DateTime<Utc>,
    pub finished_at: DateTime<Utc>,
    pub duration_ms: i64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssessmentResponse {
    pub subject: String,
    pub subject_kind: String,
    pub plugin_id: String,
    pub lang: String,
    pub pass_threshold: f64,
    pub total_score: f64,
    /// Keyed by principle letter.
    pub group_scores: BTreeMap<String, f64>,
    pub indicators: Vec<IndicatorBlock>,
    pub harvest_notes: Vec<String>,
    pub timing: Timing,
}

pub fn indicator_block(
    result: &TestResult,
    registry: &IndicatorRegistry,
    pass_threshold: f64,
) -> IndicatorBlock {
    let ind = registry
        .get(&result.config_key)
        .expect("results only cover registry indicators");
    IndicatorBlock {
        id: result.indicator_id.to_string(),
        config_key: result.config_key.clone(),
        name: result.name.clone(),
        group: ind.group.letter().to_string(),
        sub_principle: ind.sub_principle.clone(),
        indicator_level: ind.priority,
        weight: registry.weight(&ind.config_key).unwrap_or(0.0),
        excluded: registry.is_excluded(&ind.config_key),
        points: result.points,
        passed: result.points >= pass_threshold,
        technical_implementation: result.implementation_note.clone(),
        technical_feedback: result.technical_feedback.clone(),
        tips: result.tips.clone(),
        evidence: result.evidence.clone(),
        dependency: ind.dependency,
        feedback_locale: result.feedback_locale.clone(),
        failed: result.failed,
    }
}

impl AssessmentResponse {
    pub fn new(a: &Assessment, registry: &IndicatorRegistry, pass_threshold: f64) -> Self {
        Self {
            subject: a.subject.normalized.clone(),
            subject_kind: format!("{:?}", a.subject.kind),
            plugin_id: a.plugin_id.clone(),
            lang: a.locale.clone(),
            pass_threshold,
            total_score: a.total_score,
            group_scores: a
                .group_scores
                .iter()
                .map(|(g, s)| (g.letter().to_string(), *s))
                .collect(),
            indicators: a
                .results
                .values()
                .map(|r| indicator_block(r, registry, pass_threshold))
                .collect(),
            harvest_notes: a.harvest_notes.clone(),
            timing: Timing {
                started_at: a.started_at,
                finished_at: a.finished_at,
                duration_ms: (a.finished_at - a.started_at).num_milliseconds(),
            },
        }
    }

    /// Indicator points keyed by canonical id.
    pub fn points(&self) -> BTreeMap<String, f64> {
        self.indicators
            .iter()
            .map(|b| (b.id.clone(), b.points))
            .collect()
    }

    /// The document without its timing block, for comparing two runs.
    pub fn without_timing(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("serializable");
        v.as_object_mut().unwrap().remove("timing");
        v
    }
}
