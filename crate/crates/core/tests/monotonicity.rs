//! Adding one metadata element never lowers any generic test's points.

use std::sync::Arc;

use fair_assess_core::evaluation::{AccessProbes, EndpointProbe};
use fair_assess_core::harvest::{
    resolve_identifier, MetadataElement, MetadataFormat, Source, TypedLink,
};
use fair_assess_core::{load_registry, EvaluationContext, PluginConfig, TestSuite};
use proptest::prelude::*;

const TERMS: &[&str] = &[
    "dc.title",
    "dc.contributor.author",
    "dc.contributor",
    "dc.date.issued",
    "dc.type",
    "dc.type.coar",
    "dc.identifier.uri",
    "dc.identifier.doi",
    "dc.relation",
    "dc.relation.ispartof",
    "dc.relation.publisherversion",
    "dc.rights",
    "dc.rights.license",
    "dc.language.iso",
    "dc.subject",
    "dc.subject.unesco",
    "dc.description",
    "dc.description.abstract",
    "dc.description.provenance",
    "dc.format",
    "dc.format.mimetype",
    "dc.coverage.spatial",
    "citation.doi",
];

const VALUES: &[&str] = &[
    "",
    "   ",
    "plain text",
    "dataset",
    "10.20350/digitalCSIC/1",
    "http://hdl.handle.net/10261/7",
    "https://doi.org/10.1/x",
    "https://example.org/page",
    "internal-42",
    "http://vocab.getty.edu/aat/300054534",
    "http://vocabularies.unesco.org/thesaurus/concept2214",
    "http://sws.geonames.org/2510769/",
    "https://creativecommons.org/licenses/by/4.0/",
    "CC BY 4.0",
    "text/csv",
    "application/pdf",
    "CSV",
    "openAccess",
];

fn element() -> impl Strategy<Value = MetadataElement> {
    (
        prop::sample::select(TERMS),
        prop::sample::select(VALUES),
        prop::bool::ANY,
    )
        .prop_map(|(t, v, landing)| {
            let source = if landing {
                Source::LandingPage
            } else {
                Source::OaiPmh
            };
            MetadataElement::new(t, v, source).unwrap()
        })
}

fn formats() -> impl Strategy<Value = Vec<MetadataFormat>> {
    let pool = vec![
        (
            "oai_dc",
            "http://www.openarchives.org/OAI/2.0/oai_dc.xsd",
            "http://www.openarchives.org/OAI/2.0/oai_dc/",
        ),
        ("dim", "", "http://www.dspace.org/xmlns/dspace/dim"),
        ("rdf", "", "http://www.openarchives.org/OAI/2.0/rdf/"),
        ("mods", "", "http://www.loc.gov/mods/v3"),
    ];
    prop::sample::subsequence(pool, 0..=4).prop_map(|v| {
        v.into_iter()
            .map(|(p, s, n)| MetadataFormat {
                prefix: p.into(),
                schema: s.into(),
                namespace: n.into(),
            })
            .collect()
    })
}

fn probe() -> impl Strategy<Value = EndpointProbe> {
    (
        prop::sample::select(vec![
            None,
            Some(200u16),
            Some(302),
            Some(403),
            Some(404),
            Some(500),
        ]),
        prop::bool::ANY,
        prop::bool::ANY,
    )
        .prop_map(|(status, https, html)| EndpointProbe {
            url: "https://r.example/x".into(),
            final_url: status.map(|_| {
                if https {
                    "https://r.example/y"
                } else {
                    "http://r.example/y"
                }
                .to_string()
            }),
            status,
            content_type: status.map(|_| if html { "text/html" } else { "text/csv" }.to_string()),
            error: status.is_none().then(|| "no route".to_string()),
        })
}

fn links() -> impl Strategy<Value = Vec<TypedLink>> {
    prop::collection::vec(
        (
            prop::sample::select(vec!["describedby", "license", "item", "cite-as"]),
            prop::sample::select(vec![None, Some("text/turtle"), Some("application/xml")]),
        )
            .prop_map(|(rel, ty)| TypedLink {
                relation: rel.into(),
                href: "https://r.example/l".into(),
                media_type: ty.map(str::to_string),
            }),
        0..3,
    )
}

fn context() -> impl Strategy<Value = EvaluationContext> {
    (
        prop::collection::vec(element(), 0..20),
        formats(),
        prop::option::of(probe()),
        prop::option::of(probe()),
        prop::collection::vec(probe(), 0..3),
        links(),
        prop::bool::ANY,
    )
        .prop_map(
            |(elements, oai_formats, landing, oai, data, landing_links, policy)| {
                let mut cfg = PluginConfig::new(
                    "generic",
                    "https://r.example/oai",
                    "https://r.example/handle/{id}",
                );
                if policy {
                    cfg.preservation_policy_url = Some("https://r.example/policy".into());
                }
                let mut c = EvaluationContext::empty(
                    resolve_identifier("10261/1").unwrap(),
                    Arc::new(cfg),
                    "en",
                );
                c.metadata.elements = elements;
                c.oai_formats = oai_formats;
                c.probes = AccessProbes { landing, oai, data };
                c.landing_links = landing_links;
                c
            },
        )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn adding_an_element_never_lowers_points(ctx in context(), extra in element()) {
        let registry = load_registry(None).unwrap();
        let suite = TestSuite::generic();
        let grown = ctx.clone().with_element(extra.clone());
        for ind in registry.indicators() {
            let before = suite.run(ind, &ctx);
            let after = suite.run(ind, &grown);
            prop_assert!(!before.failed && !after.failed);
            prop_assert!(
                after.points >= before.points,
                "{} dropped from {} to {} after adding {:?}",
                ind.id, before.points, after.points, extra
            );
        }
    }
}
