//! Behaviour of the seven overridden institutional tests on hand-built
//! passing and failing contexts.

use std::sync::Arc;
use std::time::Instant;

use fair_assess_core::config::{load_plugin_config, PluginConfig};
use fair_assess_core::evaluation::generic::generic_note;
use fair_assess_core::harvest::{
    resolve_identifier, MetadataElement, MetadataFormat, Source, StaticTransport,
};
use fair_assess_core::institutional::OVERRIDDEN;
use fair_assess_core::{
    EvaluationContext, Evaluator, InstitutionalPlugin, Plugin, TestResult, TestSuite,
};

fn config() -> PluginConfig {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures/repository/config.ini");
    load_plugin_config(&path, "institutional").unwrap()
}

fn evaluator() -> Evaluator {
    Evaluator::builder(Arc::new(StaticTransport::new()))
        .plugin(Arc::new(InstitutionalPlugin::new(config()).unwrap()))
        .build()
        .unwrap()
}

fn ctx(elements: &[(&str, &str)], source: Source) -> EvaluationContext {
    let mut c = EvaluationContext::empty(
        resolve_identifier("10261/5").unwrap(),
        Arc::new(config()),
        "en",
    );
    for (t, v) in elements {
        c = c.with_element(MetadataElement::new(t, *v, source).unwrap());
    }
    c
}

fn format(prefix: &str, ns: &str) -> MetadataFormat {
    MetadataFormat {
        prefix: prefix.into(),
        schema: String::new(),
        namespace: ns.into(),
    }
}

fn run(ev: &Evaluator, c: &EvaluationContext, key: &str) -> TestResult {
    let a = ev.evaluate_context(c, "institutional").unwrap();
    a.results
        .values()
        .find(|r| r.config_key == key)
        .unwrap()
        .clone()
}

fn institutional_tip(key: &str) -> String {
    let text = include_str!("../data/translations/institutional/en.properties");
    let prefix = format!("{key}.tips = ");
    text.lines()
        .find_map(|l| l.strip_prefix(&prefix))
        .unwrap()
        .to_string()
}

const MANDATORY: [(&str, &str); 7] = [
    ("dc.contributor.author", "Ruiz, Marta"),
    ("dc.title", "Field notes"),
    ("dc.date.issued", "2019"),
    ("dc.type", "dataset"),
    ("dc.identifier.uri", "http://hdl.handle.net/10261/5"),
    ("dc.rights", "openAccess"),
    ("dc.language.iso", "spa"),
];

/// (key, passing context, failing context, expected failing points)
fn cases() -> Vec<(&'static str, EvaluationContext, EvaluationContext, f64)> {
    let mut rich_enough = MANDATORY.to_vec();
    rich_enough.extend([
        ("dc.publisher", "Example Institute"),
        ("dc.subject", "soil"),
        ("dc.description.abstract", "Notes."),
    ]);
    let mut full = rich_enough.clone();
    full.extend([
        ("dc.contributor.funder", "Agency"),
        ("dc.date.available", "2020"),
        ("dc.format.mimetype", "text/csv"),
        ("dc.coverage.spatial", "Spain"),
        ("dc.description", "See files"),
        ("dc.identifier.doi", "10.20350/digitalCSIC/5"),
        ("dc.relation.ispartof", "10261/4"),
        (
            "dc.rights.license",
            "https://creativecommons.org/licenses/by/4.0/",
        ),
        (
            "dc.subject.unesco",
            "http://vocabularies.unesco.org/thesaurus/concept2214",
        ),
        ("dc.type.coar", "http://purl.org/coar/resource_type/c_ddb1"),
    ]);
    let mut rdf = ctx(&[], Source::OaiPmh);
    rdf.oai_formats = vec![format("rdf", "http://www.openarchives.org/OAI/2.0/rdf/")];
    let mut dc_only = ctx(&[], Source::OaiPmh);
    dc_only.oai_formats = vec![format(
        "oai_dc",
        "http://www.openarchives.org/OAI/2.0/oai_dc/",
    )];
    vec![
        (
            "rda_f1_01m",
            ctx(
                &[("dc.identifier.doi", "10.20350/digitalCSIC/5")],
                Source::OaiPmh,
            ),
            ctx(&[("dc.title", "x")], Source::OaiPmh),
            0.0,
        ),
        (
            "rda_f1_01d",
            ctx(
                &[("dc.identifier.uri", "http://hdl.handle.net/10261/5")],
                Source::OaiPmh,
            ),
            ctx(&[("dc.identifier.other", "internal-5")], Source::OaiPmh),
            0.0,
        ),
        (
            "rda_a1_02m",
            ctx(&[("dc.title", "Field notes")], Source::LandingPage),
            ctx(&[("dc.title", "Field notes")], Source::OaiPmh),
            0.0,
        ),
        (
            "rda_a1_02d",
            ctx(&[("dc.rights", "openAccess")], Source::OaiPmh),
            ctx(&[("dc.description", "ask the author")], Source::OaiPmh),
            0.0,
        ),
        ("rda_i1_02m", rdf, dc_only, 0.0),
        // all 7 mandatory terms (75) + 10 of 20 distinct terms (12.5)
        (
            "rda_r1_01m",
            ctx(&full, Source::OaiPmh),
            ctx(&rich_enough, Source::OaiPmh),
            87.5,
        ),
        // license as text rather than URL counts half
        (
            "rda_r1_1_01m",
            ctx(
                &[(
                    "dc.rights.license",
                    "https://creativecommons.org/licenses/by/4.0/",
                )],
                Source::OaiPmh,
            ),
            ctx(&[("dc.rights.license", "CC BY 4.0")], Source::OaiPmh),
            50.0,
        ),
    ]
}

#[test]
fn passing_and_failing_fixtures() {
    let started = Instant::now();
    let ev = evaluator();
    let cases = cases();
    assert_eq!(cases.len(), OVERRIDDEN.len());
    for (key, pass, fail, expected) in &cases {
        let ok = run(&ev, pass, key);
        assert_eq!(ok.points, 100.0, "{key} passing fixture");
        assert!(ok.tips.is_empty(), "{key}: no tip at full marks");

        let bad = run(&ev, fail, key);
        assert_eq!(bad.points, *expected, "{key} failing fixture");
        assert_eq!(bad.tips, institutional_tip(key), "{key} tip");
        assert!(!bad.technical_feedback.is_empty());
    }
    assert!(started.elapsed().as_secs_f64() < 1.0);
}

#[test]
fn tips_are_localized() {
    let ev = evaluator();
    let mut c = ctx(&[("dc.rights.license", "CC BY 4.0")], Source::OaiPmh);
    c.locale = "es".into();
    let es = run(&ev, &c, "rda_r1_1_01m");
    assert_eq!(es.points, 50.0);
    assert_eq!(es.feedback_locale, "es");
    assert_ne!(es.tips, institutional_tip("rda_r1_1_01m"));
    assert!(es.tips.contains("dc.rights.license"));
}

#[test]
fn specific_tip_contents() {
    let ev = evaluator();
    let f1 = run(&ev, &ctx(&[], Source::OaiPmh), "rda_f1_01m");
    assert!(f1.tips.contains("technical office"));
    let a1 = run(&ev, &ctx(&[], Source::OaiPmh), "rda_a1_02m");
    assert!(a1.tips.contains("report it to the repository"));
    let r11 = run(&ev, &ctx(&[], Source::OaiPmh), "rda_r1_1_01m");
    assert_eq!(r11.points, 0.0);
    assert!(r11.tips.contains("public-license-selector"));
}

#[test]
fn overrides_stay_local() {
    let plugin = InstitutionalPlugin::new(config()).unwrap();
    let generic = TestSuite::generic();
    for key in generic.keys() {
        let note = &plugin.tests().get(key).unwrap().implementation_note;
        if OVERRIDDEN.contains(&key) {
            assert_ne!(Some(note.as_str()), generic_note(key), "{key}");
        } else {
            assert_eq!(Some(note.as_str()), generic_note(key), "{key}");
        }
    }
}

#[test]
fn notes_reflect_configured_terms() {
    let plugin = InstitutionalPlugin::new(config()).unwrap();
    let note = |k: &str| plugin.tests().get(k).unwrap().implementation_note.clone();
    assert!(note("rda_f1_01m").contains("dc.identifier.uri, dc.identifier.doi"));
    assert!(note("rda_r1_1_01m").contains("dc.rights.license"));
    assert!(note("rda_r1_01m").contains("20"));
}
