//! Weighted aggregation of indicator points.
//!
//! `Ts = Σ(Pᵢ·Wᵢ) / ΣWᵢ`, applied to the whole registry for the total score
//! and to each principle group for the group scores. Sums use compensated
//! accumulation over key order, so results do not depend on insertion order.

use std::collections::BTreeMap;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::registry::{IndicatorRegistry, PrincipleGroup};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ScoreError {
    #[error("points and weights cover different indicators (first difference: `{0}`)")]
    KeyMismatch(String),
    #[error("nothing to score{}", .0.map(|g| format!(" in group {g}")).unwrap_or_default())]
    EmptyInput(Option<PrincipleGroup>),
    #[error("weight of `{key}` must be strictly positive, got {value}")]
    InvalidWeight { key: String, value: f64 },
    #[error("points of `{key}` must lie in [0, 100], got {value}")]
    PointsOutOfRange { key: String, value: f64 },
    #[error("`{0}` is not in the registry")]
    UnknownIndicator(String),
}

/// Neumaier-compensated sum.
fn compensated_sum(values: impl IntoIterator<Item = f64>) -> f64 {
    let mut sum = 0.0_f64;
    let mut c = 0.0_f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            c += (sum - t) + v;
        } else {
            c += (v - t) + sum;
        }
        sum = t;
    }
    sum + c
}

fn check_inputs<K>(points: &BTreeMap<K, f64>, weights: &BTreeMap<K, f64>) -> Result<(), ScoreError>
where
    K: Ord + ToString,
{
    if let Some(k) = points
        .keys()
        .find(|k| !weights.contains_key(*k))
        .or_else(|| weights.keys().find(|k| !points.contains_key(*k)))
    {
        return Err(ScoreError::KeyMismatch(k.to_string()));
    }
    for (k, &w) in weights {
        if !w.is_finite() || w <= 0.0 {
            return Err(ScoreError::InvalidWeight {
                key: k.to_string(),
                value: w,
            });
        }
    }
    for (k, &p) in points {
        if !(0.0..=100.0).contains(&p) {
            return Err(ScoreError::PointsOutOfRange {
                key: k.to_string(),
                value: p,
            });
        }
    }
    Ok(())
}

/// Weighted mean of `points` under `weights`. Both maps must have the same
/// keys.
pub fn total_score<K>(
    points: &BTreeMap<K, f64>,
    weights: &BTreeMap<K, f64>,
) -> Result<f64, ScoreError>
where
    K: Ord + ToString,
{
    check_inputs(points, weights)?;
    if points.is_empty() {
        return Err(ScoreError::EmptyInput(None));
    }
    Ok(weighted_mean(points.iter().map(|(k, &p)| (p, weights[k]))))
}

fn weighted_mean(pairs: impl Iterator<Item = (f64, f64)> + Clone) -> f64 {
    let numerator = compensated_sum(pairs.clone().map(|(p, w)| p * w));
    let denominator = compensated_sum(pairs.map(|(_, w)| w));
    // the mean of values in [0, 100] stays in range; clamp rounding drift
    (numerator / denominator).clamp(0.0, 100.0)
}

/// Per-group weighted means. Keys may be canonical ids or config keys; every
/// registry group must have at least one scored indicator.
pub fn group_scores<K>(
    points: &BTreeMap<K, f64>,
    weights: &BTreeMap<K, f64>,
    registry: &IndicatorRegistry,
) -> Result<BTreeMap<PrincipleGroup, f64>, ScoreError>
where
    K: Ord + ToString + AsRef<str>,
{
    check_inputs(points, weights)?;
    let mut grouped: BTreeMap<PrincipleGroup, Vec<(f64, f64)>> = BTreeMap::new();
    for (k, &p) in points {
        let ind = registry
            .get(k.as_ref())
            .ok_or_else(|| ScoreError::UnknownIndicator(k.to_string()))?;
        grouped.entry(ind.group).or_default().push((p, weights[k]));
    }
    let mut out = BTreeMap::new();
    for group in PrincipleGroup::ALL {
        if registry.by_group(group).next().is_none() {
            continue;
        }
        let pairs = grouped
            .get(&group)
            .filter(|v| !v.is_empty())
            .ok_or(ScoreError::EmptyInput(Some(group)))?;
        out.insert(group, weighted_mean(pairs.iter().copied()));
    }
    Ok(out)
}

/// Multiplies every weight by `factor`.
pub fn scale_weights<K: Ord + Clone>(weights: &BTreeMap<K, f64>, factor: f64) -> BTreeMap<K, f64> {
    weights
        .iter()
        .map(|(k, w)| (k.clone(), w * factor))
        .collect()
}

/// True when rescaling all weights by `factor` moves neither the total nor any
/// group score by more than `tolerance`.
pub fn is_scale_invariant<K>(
    points: &BTreeMap<K, f64>,
    weights: &BTreeMap<K, f64>,
    registry: &IndicatorRegistry,
    factor: f64,
    tolerance: f64,
) -> Result<bool, ScoreError>
where
    K: Ord + Clone + ToString + AsRef<str>,
{
    if !factor.is_finite() || factor <= 0.0 {
        return Err(ScoreError::InvalidWeight {
            key: "<scale factor>".into(),
            value: factor,
        });
    }
    let scaled = scale_weights(weights, factor);
    let t0 = total_score(points, weights)?;
    let t1 = total_score(points, &scaled)?;
    let g0 = group_scores(points, weights, registry)?;
    let g1 = group_scores(points, &scaled, registry)?;
    Ok((t0 - t1).abs() <= tolerance && g0.iter().all(|(g, v)| (v - g1[g]).abs() <= tolerance))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct IndicatorScore {
    pub points: f64,
    pub weight: f64,
    /// `points × weight`.
    pub contribution: f64,
    pub excluded: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScoreBreakdown {
    pub total: f64,
    pub per_group: BTreeMap<PrincipleGroup, f64>,
    /// Keyed by canonical id, in registry order.
    pub per_indicator: IndexMap<String, IndicatorScore>,
}

impl ScoreBreakdown {
    /// Scores `points` (keyed by canonical id or config key) against the
    /// registry's weights. Indicators the registry excludes are reported but
    /// left out of numerator and denominator; groups left with nothing to
    /// score are omitted.
    pub fn compute(
        points: &BTreeMap<String, f64>,
        registry: &IndicatorRegistry,
    ) -> Result<Self, ScoreError> {
        let mut per_indicator = IndexMap::new();
        let mut scored_points = BTreeMap::new();
        let mut scored_weights = BTreeMap::new();
        let mut seen = 0;
        for ind in registry.indicators() {
            let canonical = ind.id.to_string();
            let p = points
                .get(&canonical)
                .or_else(|| points.get(&ind.config_key))
                .copied()
                .ok_or_else(|| ScoreError::KeyMismatch(canonical.clone()))?;
            seen += 1;
            let w = registry.weight(&ind.config_key).expect("registry weight");
            let excluded = registry.is_excluded(&ind.config_key);
            per_indicator.insert(
                canonical.clone(),
                IndicatorScore {
                    points: p,
                    weight: w,
                    contribution: p * w,
                    excluded,
                },
            );
            if !excluded {
                scored_points.insert(canonical.clone(), p);
                scored_weights.insert(canonical, w);
            }
        }
        if seen != points.len() {
            let extra = points
                .keys()
                .find(|k| registry.get(k).is_none())
                .cloned()
                .unwrap_or_default();
            return Err(ScoreError::KeyMismatch(extra));
        }
        let total = total_score(&scored_points, &scored_weights)?;
        let mut per_group = BTreeMap::new();
        for group in PrincipleGroup::ALL {
            let keys: Vec<&String> = scored_points
                .keys()
                .filter(|k| registry.get(k).is_some_and(|i| i.group == group))
                .collect();
            if keys.is_empty() {
                continue;
            }
            per_group.insert(
                group,
                weighted_mean(keys.iter().map(|k| (scored_points[*k], scored_weights[*k]))),
            );
        }
        Ok(Self {
            total,
            per_group,
            per_indicator,
        })
    }
}

/// Two-decimal presentation, e.g. `99.26`.
pub fn format_score(score: f64) -> String {
    format!("{score:.2}")
}
