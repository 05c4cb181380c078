mod common;

use std::collections::BTreeMap;

use axum::http::StatusCode;
use serde_json::Value;

use common::{call, request, state, untimed, MINIMAL, RICH, UNREACHABLE};

const ALL: &str = "/v1.0/rda/rda_all";

#[tokio::test(flavor = "multi_thread")]
async fn rda_all_returns_41_blocks() {
    let st = state();
    let (status, body) = call(&st, "POST", ALL, Some(&request(RICH, "institutional"))).await;
    assert_eq!(status, StatusCode::OK, "{body}");
    let blocks = body["indicators"].as_array().unwrap();
    assert_eq!(blocks.len(), 41);
    assert_eq!(body["plugin_id"], "institutional");
    assert_eq!(body["lang"], "en");
    assert!((body["total_score"].as_f64().unwrap() - 6600.0 / 68.0).abs() < 1e-9);
    for b in blocks {
        for field in [
            "name",
            "indicator_level",
            "technical_implementation",
            "technical_feedback",
            "tips",
        ] {
            assert!(b[field].is_string(), "{field} in {b}");
        }
        assert!(!b["name"].as_str().unwrap().is_empty());
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn response_recomputes_from_its_own_points() {
    let st = state();
    for id in [RICH, MINIMAL] {
        let (_, body) = call(&st, "POST", ALL, Some(&request(id, "generic"))).await;
        let blocks = body["indicators"].as_array().unwrap();
        let mut num: BTreeMap<String, f64> = BTreeMap::new();
        let mut den: BTreeMap<String, f64> = BTreeMap::new();
        for b in blocks {
            let (p, w) = (b["points"].as_f64().unwrap(), b["weight"].as_f64().unwrap());
            for key in [b["group"].as_str().unwrap().to_string(), "total".into()] {
                *num.entry(key.clone()).or_default() += p * w;
                *den.entry(key).or_default() += w;
            }
        }
        let total = num["total"] / den["total"];
        assert!((body["total_score"].as_f64().unwrap() - total).abs() < 1e-9);
        for (g, s) in body["group_scores"].as_object().unwrap() {
            assert!((s.as_f64().unwrap() - num[g] / den[g]).abs() < 1e-9, "{g}");
        }
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn error_statuses() {
    let st = state();
    let cases: [(&str, &str, StatusCode); 6] = [
        (
            ALL,
            r#"{"id": "", "repo": "institutional"}"#,
            StatusCode::BAD_REQUEST,
        ),
        (ALL, r#"{"id": "x", "repo": "nope"}"#, StatusCode::NOT_FOUND),
        (ALL, r#"{"id": 5}"#, StatusCode::BAD_REQUEST),
        (ALL, "not json", StatusCode::BAD_REQUEST),
        (
            ALL,
            &request(UNREACHABLE, "institutional"),
            StatusCode::BAD_GATEWAY,
        ),
        (
            "/v1.0/rda/rda_zz_99x",
            &request(RICH, "institutional"),
            StatusCode::NOT_FOUND,
        ),
    ];
    for (uri, body, expected) in cases {
        let (status, resp) = call(&st, "POST", uri, Some(body)).await;
        assert_eq!(status, expected, "{uri} {body}: {resp}");
        assert!(resp["error"].is_string(), "{resp}");
        assert!(resp.get("indicators").is_none(), "no partial assessment");
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn identical_requests_identical_bodies() {
    let st = state();
    let body = request(MINIMAL, "institutional");
    let (_, a) = call(&st, "POST", ALL, Some(&body)).await;
    let (_, _) = call(&st, "POST", ALL, Some(&request(RICH, "generic"))).await;
    let (_, b) = call(&st, "POST", ALL, Some(&body)).await;
    assert_eq!(untimed(a), untimed(b));
}

#[tokio::test(flavor = "multi_thread")]
async fn single_indicator_equals_rda_all_block() {
    let st = state();
    for id in [RICH, MINIMAL] {
        let (_, all) = call(&st, "POST", ALL, Some(&request(id, "institutional"))).await;
        for block in all["indicators"].as_array().unwrap() {
            let key = block["config_key"].as_str().unwrap();
            let (status, one) = call(
                &st,
                "POST",
                &format!("/v1.0/rda/{key}"),
                Some(&request(id, "institutional")),
            )
            .await;
            assert_eq!(status, StatusCode::OK);
            assert_eq!(&one, block, "{id} {key}");
        }
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn single_indicator_on_pid_fixture() {
    let st = state();
    let (status, b) = call(
        &st,
        "POST",
        "/v1.0/rda/rda_f1_01m",
        Some(&request(RICH, "institutional")),
    )
    .await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(b["points"], 100.0);
    assert_eq!(b["id"], "RDA-F1-01M");
}

#[tokio::test(flavor = "multi_thread")]
async fn spec_lists_exactly_the_registry() {
    let st = state();
    let (status, spec) = call(&st, "GET", "/v1.0/api-spec", None).await;
    assert_eq!(status, StatusCode::OK);
    let paths = spec["paths"].as_object().unwrap();
    let registry = fair_assess_core::load_registry(None).unwrap();
    let indicator_paths: Vec<&String> = paths.keys().filter(|p| !p.ends_with("/rda_all")).collect();
    assert_eq!(indicator_paths.len(), 41);
    assert!(paths.contains_key(ALL));
    for ind in registry.indicators() {
        let op = &paths[&format!("/v1.0/rda/{}", ind.config_key)]["post"];
        assert_eq!(
            op["x-weight"].as_f64(),
            Some(ind.priority.default_weight()),
            "{}",
            ind.id
        );
        assert_eq!(op["x-priority"], ind.priority.to_string());
        assert_eq!(op["x-indicator-id"], ind.id.to_string());
    }
}

#[tokio::test(flavor = "multi_thread")]
async fn health_reports_version() {
    let st = state();
    let (status, h) = call(&st, "GET", "/health", None).await;
    assert_eq!(status, StatusCode::OK);
    assert_eq!(h["version"], env!("CARGO_PKG_VERSION"));
    assert_eq!(h["indicators"], 41);
    let plugins: Vec<&Value> = h["plugins"].as_array().unwrap().iter().collect();
    assert_eq!(
        plugins,
        [&Value::from("generic"), &Value::from("institutional")]
    );
}

#[tokio::test(flavor = "multi_thread")]
async fn language_fallback_and_default_plugin() {
    let st = state();
    let (_, es) = call(
        &st,
        "POST",
        ALL,
        Some(r#"{"id": "10261/900002", "lang": "es-ES"}"#),
    )
    .await;
    assert_eq!(es["plugin_id"], "institutional");
    assert_eq!(es["lang"], "es");
    let (_, fr) = call(
        &st,
        "POST",
        ALL,
        Some(r#"{"id": "10261/900002", "lang": "fr"}"#),
    )
    .await;
    assert_eq!(fr["lang"], "en");
    // language changes texts, never scores
    assert_eq!(es["total_score"], fr["total_score"]);
}
