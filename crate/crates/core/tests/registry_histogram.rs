use fair_assess_core::{load_registry, PrincipleGroup, PriorityLevel};

#[test]
fn forty_one_indicators_and_priority_histogram() {
    let r = load_registry(None).unwrap();
    assert_eq!(r.len(), 41);
    let expected = [
        (PrincipleGroup::F, (7, 0, 0)),
        (PrincipleGroup::A, (8, 3, 1)),
        (PrincipleGroup::I, (0, 7, 5)),
        (PrincipleGroup::R, (5, 4, 1)),
    ];
    for (g, counts) in expected {
        assert_eq!(r.priority_counts(g), counts, "{g:?}");
    }
}

#[test]
fn default_weights() {
    assert_eq!(PriorityLevel::Essential.default_weight(), 2.0);
    assert_eq!(PriorityLevel::Important.default_weight(), 1.5);
    assert_eq!(PriorityLevel::Useful.default_weight(), 1.0);
    let r = load_registry(None).unwrap();
    for ind in r.indicators() {
        assert_eq!(
            r.weight(&ind.config_key),
            Some(ind.priority.default_weight())
        );
    }
    assert_eq!(r.weights().values().sum::<f64>(), 68.0);
}

#[test]
fn id_forms_resolve_to_the_same_indicator() {
    let r = load_registry(None).unwrap();
    let a = r.get("RDA-R1.1-01M").unwrap();
    let b = r.get("rda_r1_1_01m").unwrap();
    assert_eq!(a.id, b.id);
    assert_eq!(a.config_key, "rda_r1_1_01m");
    assert!(r.get("rda_zz_99x").is_none());
}
