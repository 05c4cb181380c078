//! Weighted scoring checked against a plain naive-summation oracle.

use std::collections::BTreeMap;
use std::time::Instant;

use fair_assess_core::registry::WeightOverrides;
use fair_assess_core::scoring::{group_scores, is_scale_invariant, total_score, ScoreBreakdown};
use fair_assess_core::{load_registry, PrincipleGroup};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn naive(points: &[f64], weights: &[f64]) -> f64 {
    let mut num = 0.0;
    let mut den = 0.0;
    for i in 0..points.len() {
        num += points[i] * weights[i];
        den += weights[i];
    }
    num / den
}

#[test]
fn thousand_random_sets_match_naive_oracle() {
    let registry = load_registry(None).unwrap();
    let keys: Vec<String> = registry
        .indicators()
        .iter()
        .map(|i| i.config_key.clone())
        .collect();
    let groups: Vec<PrincipleGroup> = registry.indicators().iter().map(|i| i.group).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed);
    let mut elapsed = std::time::Duration::ZERO;
    for trial in 0..1000 {
        let p: Vec<f64> = (0..keys.len())
            .map(|_| match rng.gen_range(0..4) {
                0 => 0.0,
                1 => 100.0,
                2 => rng.gen_range(0..=4) as f64 * 25.0,
                _ => rng.gen_range(0.0..=100.0),
            })
            .collect();
        let w: Vec<f64> = (0..keys.len()).map(|_| rng.gen_range(0.01..10.0)).collect();
        let points: BTreeMap<String, f64> = keys.iter().cloned().zip(p.iter().copied()).collect();
        let weights: BTreeMap<String, f64> = keys.iter().cloned().zip(w.iter().copied()).collect();

        let started = Instant::now();
        let total = total_score(&points, &weights).unwrap();
        let per_group = group_scores(&points, &weights, &registry).unwrap();
        elapsed += started.elapsed();

        assert!((total - naive(&p, &w)).abs() < 1e-9, "trial {trial}");
        for g in PrincipleGroup::ALL {
            let idx: Vec<usize> = (0..keys.len()).filter(|&i| groups[i] == g).collect();
            let gp: Vec<f64> = idx.iter().map(|&i| p[i]).collect();
            let gw: Vec<f64> = idx.iter().map(|&i| w[i]).collect();
            assert!(
                (per_group[&g] - naive(&gp, &gw)).abs() < 1e-9,
                "trial {trial} {g:?}"
            );
        }

        // the registry path agrees once the same weights are installed
        if trial % 10 == 0 {
            let overrides: WeightOverrides = weights.clone();
            let reg = registry.clone().with_weight_overrides(&overrides).unwrap();
            let b = ScoreBreakdown::compute(&points, &reg).unwrap();
            assert!((b.total - total).abs() < 1e-9);
            assert_eq!(b.per_group.len(), 4);
        }
    }
    assert!(elapsed.as_secs_f64() < 1.0, "{elapsed:?}");
}

#[test]
fn default_weights_on_uniform_points() {
    let registry = load_registry(None).unwrap();
    let points: BTreeMap<String, f64> = registry
        .indicators()
        .iter()
        .map(|i| (i.config_key.clone(), 50.0))
        .collect();
    let b = ScoreBreakdown::compute(&points, &registry).unwrap();
    assert_eq!(b.total, 50.0);
    assert!(b.per_group.values().all(|&v| v == 50.0));
}

#[test]
fn exclusions_leave_numerator_and_denominator() {
    let registry = load_registry(None)
        .unwrap()
        .with_exclusions(["rda_a2_01m"])
        .unwrap();
    let points: BTreeMap<String, f64> = registry
        .indicators()
        .iter()
        .map(|i| {
            let p = if i.config_key == "rda_a2_01m" {
                0.0
            } else {
                100.0
            };
            (i.config_key.clone(), p)
        })
        .collect();
    let b = ScoreBreakdown::compute(&points, &registry).unwrap();
    assert_eq!(b.total, 100.0);
    assert!(b.per_indicator["RDA-A2-01M"].excluded);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn total_within_point_range(p in prop::collection::vec(0.0f64..=100.0, 41), w in prop::collection::vec(0.1f64..5.0, 41)) {
        let registry = load_registry(None).unwrap();
        let keys: Vec<String> = registry.indicators().iter().map(|i| i.config_key.clone()).collect();
        let points: BTreeMap<_, _> = keys.iter().cloned().zip(p.iter().copied()).collect();
        let weights: BTreeMap<_, _> = keys.iter().cloned().zip(w).collect();
        let t = total_score(&points, &weights).unwrap();
        let lo = p.iter().cloned().fold(f64::INFINITY, f64::min);
        let hi = p.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        prop_assert!(t >= lo - 1e-9 && t <= hi + 1e-9);
    }

    #[test]
    fn uniform_rescaling_changes_nothing(p in prop::collection::vec(0.0f64..=100.0, 41), factor in 0.01f64..100.0) {
        let registry = load_registry(None).unwrap();
        let points: BTreeMap<String, f64> = registry
            .indicators()
            .iter()
            .map(|i| i.config_key.clone())
            .zip(p)
            .collect();
        prop_assert!(is_scale_invariant(&points, registry.weights(), &registry, factor, 1e-9).unwrap());
    }
}
