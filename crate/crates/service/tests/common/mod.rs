#![allow(dead_code)]

use std::path::{Path, PathBuf};
use std::sync::Arc;

use axum::body::Body;
use axum::http::{Request, StatusCode};
use fair_assess::{router, AppState, ServiceConfig};
use http_body_util::BodyExt;
use serde_json::Value;
use tower::ServiceExt;

pub const RICH: &str = "10261/900001";
pub const MINIMAL: &str = "10261/900002";
pub const UNREACHABLE: &str = "10261/900003";

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn config_path() -> PathBuf {
    fixtures().join("service.yaml")
}

pub fn core_fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/tests/fixtures")
}

pub fn config() -> ServiceConfig {
    ServiceConfig::load(&config_path()).unwrap()
}

pub fn state() -> Arc<AppState> {
    let cfg = config();
    Arc::new(AppState::new(
        cfg.evaluator().unwrap(),
        &cfg.service.default_lang,
        cfg.service.pass_threshold,
    ))
}

pub async fn call(
    state: &Arc<AppState>,
    method: &str,
    uri: &str,
    body: Option<&str>,
) -> (StatusCode, Value) {
    let req = Request::builder()
        .method(method)
        .uri(uri)
        .header("content-type", "application/json")
        .body(
            body.map(|b| Body::from(b.to_string()))
                .unwrap_or_else(Body::empty),
        )
        .unwrap();
    let resp = router(state.clone()).oneshot(req).await.unwrap();
    let status = resp.status();
    let bytes = resp.into_body().collect().await.unwrap().to_bytes();
    let value = serde_json::from_slice(&bytes).unwrap_or(Value::Null);
    (status, value)
}

pub fn request(id: &str, repo: &str) -> String {
    serde_json::json!({"id": id, "repo": repo, "lang": "en"}).to_string()
}

/// The response body with its timing block removed.
pub fn untimed(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing");
    v
}
