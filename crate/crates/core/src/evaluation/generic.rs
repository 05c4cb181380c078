//! Repository-agnostic tests for all 41 indicators.
//!
//! Every test is a pure function of the context. All of them are
//! existence- or count-based over metadata, so adding an element can only
//! keep or raise a score.

use std::collections::{BTreeMap, BTreeSet};
use std::slice;
use std::sync::LazyLock;

use regex::Regex;

use crate::harvest::{resolve_identifier, IdentifierKind, MetadataElement, Source};

use super::plugin::IndicatorTest;
use super::{EndpointProbe, EvaluationContext, TestFailure, TestOutcome};

type Verdict = Result<TestOutcome, TestFailure>;

static MEDIA_TYPE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(r"^(application|audio|font|image|model|multipart|text|video|chemical)/[a-z0-9][a-z0-9!#$&^_.+-]*$").unwrap()
});

/// Terms whose values describe the data itself (subject, type, coverage, format).
const DATA_VOCABULARY_TERMS: [&str; 4] =
    ["dc.subject.*", "dc.type.*", "dc.coverage.*", "dc.format.*"];

const RDF_MEDIA_TYPES: [&str; 5] = [
    "application/rdf+xml",
    "text/turtle",
    "application/ld+json",
    "application/n-triples",
    "application/trig",
];

/// `value` starts with `prefix`, ignoring case and the http/https difference.
pub fn url_prefix_match(value: &str, prefix: &str) -> bool {
    fn strip(s: &str) -> String {
        let l = s.trim().to_ascii_lowercase();
        l.strip_prefix("https://")
            .or_else(|| l.strip_prefix("http://"))
            .map(str::to_string)
            .unwrap_or(l)
    }
    let p = strip(prefix);
    !p.is_empty() && strip(value).starts_with(&p)
}

/// The `type/subtype` part of a media type value, if it is one.
pub fn media_type(value: &str) -> Option<String> {
    let essence = value.split(';').next()?.trim().to_ascii_lowercase();
    MEDIA_TYPE.is_match(&essence).then_some(essence)
}

fn is_url(value: &str) -> bool {
    let v = value.trim().to_ascii_lowercase();
    v.starts_with("http://") || v.starts_with("https://")
}

fn probe_text(p: &EndpointProbe) -> String {
    match (p.status, &p.error) {
        (Some(s), _) => format!("{} -> HTTP {s}", p.url),
        (None, Some(e)) => format!("{} -> {e}", p.url),
        (None, None) => p.url.clone(),
    }
}

fn metadata_probes(ctx: &EvaluationContext) -> impl Iterator<Item = &EndpointProbe> {
    ctx.probes.landing.iter().chain(ctx.probes.oai.iter())
}

fn fail(points: f64, feedback: impl Into<String>) -> TestOutcome {
    TestOutcome::new(points).feedback(feedback)
}

fn owned(items: &[&str]) -> Vec<String> {
    items.iter().map(|s| s.to_string()).collect()
}

// ---- F ----------------------------------------------------------------

/// Scans `terms` for identifier values; `persistent` restricts the passing
/// kinds to DOI and Handle.
pub fn identifier_presence(
    ctx: &EvaluationContext,
    terms: &[String],
    persistent: bool,
) -> TestOutcome {
    let mut out = TestOutcome::new(0.0);
    let mut hit = false;
    for e in ctx.elements(terms) {
        let Ok(id) = resolve_identifier(&e.value) else {
            continue;
        };
        out = out.evidence(&e.term, format!("{} [{}]", e.value, id.kind));
        hit |= if persistent {
            id.kind.is_persistent()
        } else {
            id.kind.is_resolvable()
        };
    }
    if hit {
        out.points = 100.0;
    } else {
        let what = if persistent {
            "persistent identifier (DOI or Handle)"
        } else {
            "resolvable identifier (DOI, Handle or URL)"
        };
        out.technical_feedback = format!("no {what} found in {}", terms.join(", "));
    }
    out
}

pub fn rda_f1_01m(ctx: &EvaluationContext) -> Verdict {
    Ok(identifier_presence(
        ctx,
        &ctx.plugin_config.identifier_terms,
        false,
    ))
}

pub fn rda_f1_01d(ctx: &EvaluationContext) -> Verdict {
    Ok(identifier_presence(
        ctx,
        &ctx.plugin_config.data_identifier_terms,
        false,
    ))
}

pub fn rda_f1_02m(ctx: &EvaluationContext) -> Verdict {
    Ok(identifier_presence(
        ctx,
        &ctx.plugin_config.identifier_terms,
        true,
    ))
}

pub fn rda_f1_02d(ctx: &EvaluationContext) -> Verdict {
    Ok(identifier_presence(
        ctx,
        &ctx.plugin_config.data_identifier_terms,
        true,
    ))
}

pub fn rda_f2_01m(ctx: &EvaluationContext) -> Verdict {
    let terms = &ctx.plugin_config.discovery_terms;
    if terms.is_empty() {
        return Err(TestFailure("no discovery terms configured".into()));
    }
    let mut out = TestOutcome::new(0.0);
    let mut missing = Vec::new();
    for t in terms {
        match ctx.elements(slice::from_ref(t)).next() {
            Some(e) => out = out.evidence(t, &e.value),
            None => missing.push(t.as_str()),
        }
    }
    out.points = 100.0 * (terms.len() - missing.len()) as f64 / terms.len() as f64;
    if !missing.is_empty() {
        out.technical_feedback = format!("discovery terms not filled: {}", missing.join(", "));
    }
    Ok(out)
}

pub fn rda_f3_01m(ctx: &EvaluationContext) -> Verdict {
    Ok(identifier_presence(
        ctx,
        &ctx.plugin_config.data_identifier_terms,
        false,
    ))
}

pub fn rda_f4_01m(ctx: &EvaluationContext) -> Verdict {
    if !ctx.oai_formats.is_empty() {
        let prefixes: Vec<&str> = ctx.oai_formats.iter().map(|f| f.prefix.as_str()).collect();
        return Ok(TestOutcome::pass().evidence("oai-pmh formats", prefixes.join(", ")));
    }
    if ctx.elements_from(Source::LandingPage).next().is_some() {
        return Ok(fail(
            50.0,
            "metadata is only exposed as embedded landing page tags; no OAI-PMH record for harvesters",
        )
        .evidence("landing page", "embedded metadata found"));
    }
    Ok(fail(
        0.0,
        "metadata is not offered for harvesting (no OAI-PMH formats, no embedded metadata)",
    ))
}

// ---- A ----------------------------------------------------------------

pub fn rda_a1_01m(ctx: &EvaluationContext) -> Verdict {
    let cfg = &ctx.plugin_config;
    if let Some(e) = ctx.elements(&cfg.access_terms).next() {
        return Ok(TestOutcome::pass().evidence(&e.term, &e.value));
    }
    if let Some(e) = ctx.elements(&cfg.access_info_terms).next() {
        return Ok(fail(
            50.0,
            format!(
                "no access condition in {}; only free-text information",
                cfg.access_terms.join(", ")
            ),
        )
        .evidence(&e.term, &e.value));
    }
    Ok(fail(
        0.0,
        format!(
            "no access information in {}",
            [cfg.access_terms.clone(), cfg.access_info_terms.clone()]
                .concat()
                .join(", ")
        ),
    ))
}

pub fn rda_a1_02m(ctx: &EvaluationContext) -> Verdict {
    let embedded = ctx.elements_from(Source::LandingPage).count();
    let described: Vec<&str> = ctx.links("describedby").map(|l| l.href.as_str()).collect();
    if embedded > 0 || !described.is_empty() {
        let mut out = TestOutcome::pass();
        if embedded > 0 {
            out = out.evidence(
                "landing page",
                format!("{embedded} embedded metadata elements"),
            );
        }
        for href in described {
            out = out.evidence("describedby", href);
        }
        return Ok(out);
    }
    Ok(fail(
        0.0,
        "landing page exposes no metadata (no DC/citation meta tags, no describedby link)",
    ))
}

pub fn rda_a1_02d(ctx: &EvaluationContext) -> Verdict {
    let terms = &ctx.plugin_config.access_terms;
    Ok(match ctx.elements(terms).next() {
        Some(e) => TestOutcome::pass().evidence(&e.term, &e.value),
        None => fail(
            0.0,
            format!("no access metadata term ({}) present", terms.join(", ")),
        ),
    })
}

pub fn rda_a1_03m(ctx: &EvaluationContext) -> Verdict {
    Ok(match &ctx.probes.landing {
        Some(p) if p.reachable() => TestOutcome::pass().evidence("landing page", probe_text(p)),
        Some(p) => fail(
            0.0,
            "the identifier does not resolve to a reachable landing page",
        )
        .evidence("landing page", probe_text(p)),
        None => fail(0.0, "landing page was not probed"),
    })
}

pub fn rda_a1_03d(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in &ctx.probes.data {
        out = out.evidence("data reference", probe_text(p));
        if p.reachable() {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback = if ctx.probes.data.is_empty() {
            "no resolvable data identifier to follow".into()
        } else {
            "no data identifier resolved".into()
        };
    }
    Ok(out)
}

pub fn rda_a1_04m(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in metadata_probes(ctx) {
        out = out.evidence("metadata endpoint", probe_text(p));
        if p.reachable() && p.standard_protocol() {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "neither the landing page nor the OAI-PMH endpoint answered over HTTP(S)".into();
    }
    Ok(out)
}

pub fn rda_a1_04d(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in &ctx.probes.data {
        out = out.evidence("data reference", probe_text(p));
        if p.reachable() && p.standard_protocol() {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback = "data is not reachable over HTTP(S)".into();
    }
    Ok(out)
}

pub fn rda_a1_05d(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for l in ctx.links("item") {
        out = out.evidence("item link", &l.href);
        out.points = 100.0;
    }
    for p in ctx
        .probes
        .data
        .iter()
        .filter(|p| p.reachable() && !p.is_html())
    {
        out = out.evidence(
            "data reference",
            format!(
                "{} ({})",
                p.url,
                p.content_type.as_deref().unwrap_or("no content type")
            ),
        );
        out.points = 100.0;
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "no machine-actionable route to the data files (no item link, data references resolve to HTML pages)".into();
    }
    Ok(out)
}

pub fn rda_a1_1_01m(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in metadata_probes(ctx) {
        out = out.evidence("metadata endpoint", probe_text(p));
        if p.reachable() && p.standard_protocol() {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "metadata is not available over an open, free protocol without authentication".into();
    }
    Ok(out)
}

pub fn rda_a1_1_01d(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in &ctx.probes.data {
        out = out.evidence("data reference", probe_text(p));
        if p.reachable() && p.standard_protocol() {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "data is not available over an open, free protocol without authentication".into();
    }
    Ok(out)
}

pub fn rda_a1_2_01d(ctx: &EvaluationContext) -> Verdict {
    let mut out = TestOutcome::new(0.0);
    for p in &ctx.probes.data {
        out = out.evidence("data reference", probe_text(p));
        if p.uses_https() && (p.reachable() || p.auth_required()) {
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "data is not served over HTTPS, which is needed for authentication and authorisation"
                .into();
    }
    Ok(out)
}

pub fn rda_a2_01m(ctx: &EvaluationContext) -> Verdict {
    Ok(match &ctx.plugin_config.preservation_policy_url {
        Some(url) => TestOutcome::pass().evidence("preservation_policy_url", url),
        None => fail(
            0.0,
            "the repository declares no metadata preservation policy (preservation_policy_url is not configured)",
        ),
    })
}

// ---- I ----------------------------------------------------------------

fn prefix_matches<'a>(
    elements: impl Iterator<Item = &'a MetadataElement>,
    prefixes: &[String],
) -> Vec<&'a MetadataElement> {
    elements
        .filter(|e| prefixes.iter().any(|p| url_prefix_match(&e.value, p)))
        .collect()
}

fn all_filled(ctx: &EvaluationContext) -> impl Iterator<Item = &MetadataElement> {
    ctx.metadata.elements.iter().filter(|e| e.is_filled())
}

pub fn rda_i1_01m(ctx: &EvaluationContext) -> Verdict {
    let hits = prefix_matches(all_filled(ctx), &ctx.plugin_config.vocabulary_url_patterns);
    Ok(if hits.is_empty() {
        fail(0.0, "no metadata value uses a resolvable vocabulary URI")
    } else {
        hits.iter()
            .fold(TestOutcome::pass(), |o, e| o.evidence(&e.term, &e.value))
    })
}

pub fn rda_i1_01d(ctx: &EvaluationContext) -> Verdict {
    Ok(media_type_declared(ctx))
}

fn media_type_declared(ctx: &EvaluationContext) -> TestOutcome {
    let terms = &ctx.plugin_config.format_terms;
    let mut out = TestOutcome::new(0.0);
    for e in ctx.elements(terms) {
        if let Some(mt) = media_type(&e.value) {
            out = out.evidence(&e.term, mt);
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback = format!(
            "no media type (type/subtype) declared in {}",
            terms.join(", ")
        );
    }
    out
}

pub fn rda_i1_02m(ctx: &EvaluationContext) -> Verdict {
    let cfg = &ctx.plugin_config;
    let mut out = TestOutcome::new(0.0);
    for f in &ctx.oai_formats {
        let by_prefix = cfg
            .rdf_format_prefixes
            .iter()
            .any(|p| p.eq_ignore_ascii_case(&f.prefix));
        let by_ns = cfg
            .rdf_namespaces
            .iter()
            .any(|n| url_prefix_match(&f.namespace, n));
        if by_prefix || by_ns {
            out = out.evidence("oai-pmh format", format!("{} ({})", f.prefix, f.namespace));
            out.points = 100.0;
        }
    }
    for l in ctx.links("describedby") {
        if l.media_type
            .as_deref()
            .and_then(media_type)
            .is_some_and(|m| RDF_MEDIA_TYPES.contains(&m.as_str()))
        {
            out = out.evidence(
                "describedby",
                format!(
                    "{} ({})",
                    l.href,
                    l.media_type.as_deref().unwrap_or_default()
                ),
            );
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback = "metadata is not offered in an RDF-based format".into();
    }
    Ok(out)
}

fn machine_readable_format(ctx: &EvaluationContext) -> TestOutcome {
    let cfg = &ctx.plugin_config;
    let mut out = TestOutcome::new(0.0);
    for e in ctx.elements(&cfg.format_terms) {
        let essence = media_type(&e.value).unwrap_or_else(|| e.value.trim().to_ascii_lowercase());
        if cfg
            .machine_readable_formats
            .iter()
            .any(|m| m.eq_ignore_ascii_case(&essence))
        {
            out = out.evidence(&e.term, essence);
            out.points = 100.0;
        }
    }
    if out.points < 100.0 {
        out.technical_feedback =
            "data format is not one of the configured machine-readable formats".into();
    }
    out
}

pub fn rda_i1_02d(ctx: &EvaluationContext) -> Verdict {
    Ok(machine_readable_format(ctx))
}

pub fn rda_i2_01m(ctx: &EvaluationContext) -> Verdict {
    let hits = prefix_matches(all_filled(ctx), &ctx.plugin_config.standard_vocabularies);
    Ok(if hits.is_empty() {
        fail(0.0, "no value comes from a registered standard vocabulary")
    } else {
        hits.iter()
            .fold(TestOutcome::pass(), |o, e| o.evidence(&e.term, &e.value))
    })
}

pub fn rda_i2_01d(ctx: &EvaluationContext) -> Verdict {
    let terms = owned(&DATA_VOCABULARY_TERMS);
    let hits = prefix_matches(
        ctx.elements(&terms),
        &ctx.plugin_config.standard_vocabularies,
    );
    Ok(if hits.is_empty() {
        fail(
            0.0,
            format!("no standard vocabulary URI in {}", terms.join(", ")),
        )
    } else {
        hits.iter()
            .fold(TestOutcome::pass(), |o, e| o.evidence(&e.term, &e.value))
    })
}

/// Relation elements whose values are identifiers. `qualified` keeps only
/// refined terms (`dc.relation.ispartof`, not bare `dc.relation`);
/// `persistent` keeps only DOI/Handle values.
fn relations(
    ctx: &EvaluationContext,
    qualified: bool,
    persistent: bool,
) -> Vec<(&MetadataElement, IdentifierKind)> {
    let patterns = &ctx.plugin_config.relation_terms;
    ctx.elements(patterns)
        .filter(|e| !qualified || patterns.iter().any(|p| is_qualified(p, &e.term)))
        .filter_map(|e| {
            let id = resolve_identifier(&e.value).ok()?;
            let ok = if persistent {
                id.kind.is_persistent()
            } else {
                id.kind.is_resolvable()
            };
            ok.then_some((e, id.kind))
        })
        .collect()
}

fn is_qualified(pattern: &str, term: &str) -> bool {
    match pattern.strip_suffix(".*") {
        Some(base) => crate::harvest::term_matches(pattern, term) && term != base,
        None => pattern == term && term.split('.').count() >= 3,
    }
}

/// `100 × min(1, n / 1)` over matching relation values.
fn relation_score(ctx: &EvaluationContext, qualified: bool, persistent: bool) -> TestOutcome {
    let found = relations(ctx, qualified, persistent);
    let points = 100.0 * (found.len() as f64 / 1.0).min(1.0);
    let mut out = found.iter().fold(TestOutcome::new(points), |o, (e, k)| {
        o.evidence(&e.term, format!("{} [{k}]", e.value))
    });
    if found.is_empty() {
        let what = match (qualified, persistent) {
            (false, false) => "reference resolving as an identifier",
            (false, true) => "reference holding a persistent identifier",
            (true, false) => "qualified reference resolving as an identifier",
            (true, true) => "qualified reference holding a persistent identifier",
        };
        out.technical_feedback = format!(
            "no {what} in {}",
            ctx.plugin_config.relation_terms.join(", ")
        );
    }
    out
}

pub fn rda_i3_01m(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, false, false))
}

pub fn rda_i3_01d(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, false, true))
}

pub fn rda_i3_02m(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, false, true))
}

pub fn rda_i3_02d(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, true, true))
}

pub fn rda_i3_03m(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, true, false))
}

pub fn rda_i3_04m(ctx: &EvaluationContext) -> Verdict {
    Ok(relation_score(ctx, true, true))
}

// ---- R ----------------------------------------------------------------

/// `75 × mandatory fill ratio + 25 × min(1, distinct filled terms / target)`.
pub fn metadata_richness(ctx: &EvaluationContext) -> Verdict {
    let cfg = &ctx.plugin_config;
    if cfg.mandatory_terms.is_empty() || cfg.richness_target == 0 {
        return Err(TestFailure(
            "mandatory_terms and richness_target must be configured".into(),
        ));
    }
    let missing: Vec<&str> = cfg
        .mandatory_terms
        .iter()
        .filter(|t| !ctx.has_any(slice::from_ref(t)))
        .map(String::as_str)
        .collect();
    let filled = cfg.mandatory_terms.len() - missing.len();
    let distinct: BTreeSet<&str> = all_filled(ctx).map(|e| e.term.as_str()).collect();
    let mandatory_part = 75.0 * filled as f64 / cfg.mandatory_terms.len() as f64;
    let richness_part = 25.0 * (distinct.len() as f64 / cfg.richness_target as f64).min(1.0);
    let mut out = TestOutcome::new(mandatory_part + richness_part)
        .evidence(
            "mandatory terms",
            format!("{filled}/{}", cfg.mandatory_terms.len()),
        )
        .evidence(
            "distinct terms",
            format!("{}/{}", distinct.len(), cfg.richness_target),
        );
    let mut notes = Vec::new();
    if !missing.is_empty() {
        notes.push(format!("mandatory terms missing: {}", missing.join(", ")));
    }
    if distinct.len() < cfg.richness_target {
        notes.push(format!(
            "{} distinct terms filled, {} expected for a rich description",
            distinct.len(),
            cfg.richness_target
        ));
    }
    out.technical_feedback = notes.join("; ");
    Ok(out)
}

pub fn rda_r1_01m(ctx: &EvaluationContext) -> Verdict {
    metadata_richness(ctx)
}

/// License present in URL form → 100, as free text → 50, absent → 0.
pub fn license_presence(ctx: &EvaluationContext) -> Verdict {
    let terms = &ctx.plugin_config.license_terms;
    let values: Vec<&MetadataElement> = ctx.elements(terms).collect();
    let mut out = values
        .iter()
        .fold(TestOutcome::new(0.0), |o, e| o.evidence(&e.term, &e.value));
    if values.iter().any(|e| is_url(&e.value)) {
        out.points = 100.0;
    } else if !values.is_empty() {
        out.points = 50.0;
        out.technical_feedback =
            "license is given as text; a license URL is machine-actionable".into();
    } else {
        out.technical_feedback = format!("no license information in {}", terms.join(", "));
    }
    Ok(out)
}

pub fn rda_r1_1_01m(ctx: &EvaluationContext) -> Verdict {
    license_presence(ctx)
}

pub fn rda_r1_1_02m(ctx: &EvaluationContext) -> Verdict {
    let cfg = &ctx.plugin_config;
    let hits = prefix_matches(ctx.elements(&cfg.license_terms), &cfg.standard_licenses);
    Ok(if hits.is_empty() {
        fail(
            0.0,
            "license does not refer to a standard license (e.g. Creative Commons, SPDX)",
        )
    } else {
        hits.iter()
            .fold(TestOutcome::pass(), |o, e| o.evidence(&e.term, &e.value))
    })
}

pub fn rda_r1_1_03m(ctx: &EvaluationContext) -> Verdict {
    if let Some(l) = ctx.links("license").next() {
        return Ok(TestOutcome::pass().evidence("license link", &l.href));
    }
    if let Some(e) = ctx
        .elements(&ctx.plugin_config.license_terms)
        .find(|e| is_url(&e.value))
    {
        return Ok(fail(
            50.0,
            "license URL present in metadata but not exposed as a typed license link",
        )
        .evidence(&e.term, &e.value));
    }
    Ok(fail(0.0, "no machine-understandable license reference"))
}

pub fn rda_r1_2_01m(ctx: &EvaluationContext) -> Verdict {
    let terms = &ctx.plugin_config.provenance_terms;
    let found: Vec<&MetadataElement> = ctx.elements(terms).collect();
    Ok(if found.is_empty() {
        fail(
            0.0,
            format!("no provenance information in {}", terms.join(", ")),
        )
    } else {
        found
            .iter()
            .fold(TestOutcome::pass(), |o, e| o.evidence(&e.term, &e.value))
    })
}

fn community_formats(ctx: &EvaluationContext) -> Vec<&crate::harvest::MetadataFormat> {
    let standards = &ctx.plugin_config.community_standards;
    ctx.oai_formats
        .iter()
        .filter(|f| {
            standards
                .iter()
                .any(|s| url_prefix_match(&f.namespace, s) || url_prefix_match(&f.schema, s))
        })
        .collect()
}

pub fn rda_r1_2_02m(ctx: &EvaluationContext) -> Verdict {
    let provenance = ctx.has_any(&ctx.plugin_config.provenance_terms);
    let formats = community_formats(ctx);
    Ok(match (provenance, formats.first()) {
        (true, Some(f)) => TestOutcome::pass()
            .evidence("provenance", "present")
            .evidence("community format", &f.prefix),
        (true, None) => fail(
            50.0,
            "provenance is recorded but not in a cross-community metadata format",
        )
        .evidence("provenance", "present"),
        (false, _) => fail(
            0.0,
            "no provenance information to express in a community format",
        ),
    })
}

pub fn rda_r1_3_01m(ctx: &EvaluationContext) -> Verdict {
    let formats = community_formats(ctx);
    Ok(if formats.is_empty() {
        fail(
            0.0,
            "metadata is not offered in a configured community standard",
        )
    } else {
        formats.iter().fold(TestOutcome::pass(), |o, f| {
            o.evidence("oai-pmh format", format!("{} ({})", f.prefix, f.namespace))
        })
    })
}

pub fn rda_r1_3_01d(ctx: &EvaluationContext) -> Verdict {
    Ok(media_type_declared(ctx))
}

pub fn rda_r1_3_02m(ctx: &EvaluationContext) -> Verdict {
    let formats = community_formats(ctx);
    if let Some(f) = formats.iter().find(|f| is_url(&f.schema)) {
        return Ok(TestOutcome::pass().evidence("schema", &f.schema));
    }
    Ok(match formats.first() {
        Some(f) => fail(
            50.0,
            "community format declared without a machine-readable schema",
        )
        .evidence("oai-pmh format", &f.prefix),
        None => fail(
            0.0,
            "no community standard format with a machine-readable schema",
        ),
    })
}

pub fn rda_r1_3_02d(ctx: &EvaluationContext) -> Verdict {
    Ok(machine_readable_format(ctx))
}

type GenericFn = fn(&EvaluationContext) -> Verdict;

const TABLE: [(&str, GenericFn, &str); 41] = [
    ("rda_f1_01m", rda_f1_01m, "Looks for a DOI, Handle or URL in the configured identifier terms."),
    ("rda_f1_01d", rda_f1_01d, "Looks for a DOI, Handle or URL in the configured data identifier terms."),
    ("rda_f1_02m", rda_f1_02m, "Looks for a persistent identifier (DOI or Handle) in the configured identifier terms."),
    ("rda_f1_02d", rda_f1_02d, "Looks for a persistent identifier (DOI or Handle) in the configured data identifier terms."),
    ("rda_f2_01m", rda_f2_01m, "Share of the configured discovery terms that are filled."),
    ("rda_f3_01m", rda_f3_01m, "Looks for an identifier of the data in the metadata (data identifier terms)."),
    ("rda_f4_01m", rda_f4_01m, "Full marks when the item is harvestable via OAI-PMH, half when it is only exposed as embedded landing page metadata."),
    ("rda_a1_01m", rda_a1_01m, "Checks the access terms; free-text access information alone counts half."),
    ("rda_a1_02m", rda_a1_02m, "Looks for metadata embedded in the landing page HTML or a describedby link, i.e. manual access to metadata."),
    ("rda_a1_02d", rda_a1_02d, "Checks the presence of an access metadata term."),
    ("rda_a1_03m", rda_a1_03m, "Resolves the identifier to its landing page."),
    ("rda_a1_03d", rda_a1_03d, "Resolves the data identifiers found in the metadata (at most three)."),
    ("rda_a1_04m", rda_a1_04m, "Checks that the landing page or the OAI-PMH endpoint answers over HTTP(S)."),
    ("rda_a1_04d", rda_a1_04d, "Checks that a data identifier answers over HTTP(S)."),
    ("rda_a1_05d", rda_a1_05d, "Looks for an item link or a data reference that returns something other than an HTML page."),
    ("rda_a1_1_01m", rda_a1_1_01m, "HTTP(S) access to metadata without credentials is taken as an open, free protocol."),
    ("rda_a1_1_01d", rda_a1_1_01d, "HTTP(S) access to data without credentials is taken as an open, free protocol."),
    ("rda_a1_2_01d", rda_a1_2_01d, "Interpretation: a protocol supports authentication and authorisation when data is served over HTTPS (open or access-controlled)."),
    ("rda_a2_01m", rda_a2_01m, "Reads the metadata preservation policy declared in the plugin configuration; it cannot be discovered from the repository."),
    ("rda_i1_01m", rda_i1_01m, "Looks for metadata values that are URIs from the configured vocabulary URL patterns."),
    ("rda_i1_01d", rda_i1_01d, "Checks that the data format is declared as a media type."),
    ("rda_i1_02m", rda_i1_02m, "Checks via OAI-PMH whether the item is available in an RDF-based format (by prefix or namespace), or linked as RDF via describedby."),
    ("rda_i1_02d", rda_i1_02d, "Checks that the data format is in the configured machine-readable format list."),
    ("rda_i2_01m", rda_i2_01m, "Matches metadata values against the configured standard vocabularies."),
    ("rda_i2_01d", rda_i2_01d, "Matches subject, type, coverage and format values against the configured standard vocabularies."),
    ("rda_i3_01m", rda_i3_01m, "Relation terms holding a resolvable identifier; one is enough for full marks."),
    ("rda_i3_01d", rda_i3_01d, "Relation terms holding a DOI or Handle; one is enough for full marks."),
    ("rda_i3_02m", rda_i3_02m, "Relation terms holding a DOI or Handle (references to other data); one is enough for full marks."),
    ("rda_i3_02d", rda_i3_02d, "Qualified relation terms holding a DOI or Handle; one is enough for full marks."),
    ("rda_i3_03m", rda_i3_03m, "Qualified relation terms holding a resolvable identifier; one is enough for full marks."),
    ("rda_i3_04m", rda_i3_04m, "Qualified relation terms holding a DOI or Handle (references to other data); one is enough for full marks."),
    ("rda_r1_01m", rda_r1_01m, "75% for the share of mandatory terms filled plus 25% for the number of distinct filled terms against the richness target."),
    ("rda_r1_1_01m", rda_r1_1_01m, "Checks the license terms: a license URL scores 100, license text 50."),
    ("rda_r1_1_02m", rda_r1_1_02m, "Matches the license against the configured standard license URL prefixes."),
    ("rda_r1_1_03m", rda_r1_1_03m, "Looks for a typed license link; a license URL only in the metadata counts half."),
    ("rda_r1_2_01m", rda_r1_2_01m, "Checks the configured provenance terms."),
    ("rda_r1_2_02m", rda_r1_2_02m, "Provenance expressed in a cross-community format scores 100; provenance alone 50."),
    ("rda_r1_3_01m", rda_r1_3_01m, "Checks that an OAI-PMH format belongs to a configured community standard."),
    ("rda_r1_3_01d", rda_r1_3_01d, "Checks that the data format is declared as a media type."),
    ("rda_r1_3_02m", rda_r1_3_02m, "A community standard format with a schema URL scores 100; without one 50."),
    ("rda_r1_3_02d", rda_r1_3_02d, "Checks that the data format is in the configured machine-readable format list."),
];

pub fn generic_tests() -> BTreeMap<String, IndicatorTest> {
    TABLE
        .iter()
        .map(|&(key, f, note)| (key.to_string(), IndicatorTest::new(note, f)))
        .collect()
}

/// Generic implementation note for `config_key`.
pub fn generic_note(config_key: &str) -> Option<&'static str> {
    TABLE
        .iter()
        .find(|(k, _, _)| *k == config_key)
        .map(|(_, _, n)| *n)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::registry::load_registry;

    #[test]
    fn table_covers_registry() {
        let reg = load_registry(None).unwrap();
        let tests = generic_tests();
        assert_eq!(tests.len(), 41);
        for ind in reg.indicators() {
            assert!(tests.contains_key(&ind.config_key), "{}", ind.config_key);
        }
    }

    #[test]
    fn url_prefixes_ignore_scheme() {
        assert!(url_prefix_match(
            "https://vocab.getty.edu/aat/300",
            "http://vocab.getty.edu/"
        ));
        assert!(!url_prefix_match("https://example.org", ""));
        assert!(!url_prefix_match("text", "http://vocab.getty.edu/"));
    }

    #[test]
    fn media_types() {
        assert_eq!(
            media_type("text/csv; charset=utf-8").as_deref(),
            Some("text/csv")
        );
        assert_eq!(
            media_type("Application/PDF").as_deref(),
            Some("application/pdf")
        );
        assert_eq!(media_type("CSV"), None);
        assert_eq!(media_type("1 file/s"), None);
    }

    #[test]
    fn qualification() {
        assert!(is_qualified("dc.relation.*", "dc.relation.ispartof"));
        assert!(!is_qualified("dc.relation.*", "dc.relation"));
        assert!(is_qualified("dc.relation.ispartof", "dc.relation.ispartof"));
        assert!(!is_qualified("dc.relation", "dc.relation"));
    }
}
