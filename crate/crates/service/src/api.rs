//! HTTP surface. Handlers are stateless: every request builds its own
//! harvest session inside the evaluator.

use std::sync::Arc;

use axum::extract::rejection::JsonRejection;
use axum::extract::{Path, State};
use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use fair_assess_core::Evaluator;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::error::{AppError, ErrorClass};
use crate::openapi::{api_spec, API_PREFIX};
use crate::response::{indicator_block, AssessmentResponse};

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvaluationRequest {
    pub id: String,
    /// Plugin id; the service default when absent.
    #[serde(default, alias = "plugin")]
    pub repo: Option<String>,
    #[serde(default)]
    pub lang: Option<String>,
}

pub struct AppState {
    pub evaluator: Evaluator,
    pub default_plugin: String,
    pub default_lang: String,
    pub pass_threshold: f64,
}

impl AppState {
    pub fn new(evaluator: Evaluator, default_lang: &str, pass_threshold: f64) -> Self {
        let default_plugin = if evaluator.plugin_ids().any(|p| p == "institutional") {
            "institutional".to_string()
        } else {
            evaluator
                .plugin_ids()
                .next()
                .unwrap_or_default()
                .to_string()
        };
        Self {
            evaluator,
            default_plugin,
            default_lang: default_lang.to_string(),
            pass_threshold,
        }
    }

    fn target(&self, req: &EvaluationRequest) -> Result<(String, String), AppError> {
        if req.id.trim().is_empty() {
            return Err(AppError::new(ErrorClass::Usage, "identifier is empty"));
        }
        let plugin = req
            .repo
            .clone()
            .unwrap_or_else(|| self.default_plugin.clone());
        let lang = self
            .evaluator
            .translations()
            .resolve_locale(req.lang.as_deref().unwrap_or(&self.default_lang));
        Ok((plugin, lang))
    }

    pub fn evaluate_all(&self, req: &EvaluationRequest) -> Result<AssessmentResponse, AppError> {
        let (plugin, lang) = self.target(req)?;
        let registry = self.evaluator.registry_for(&plugin)?;
        let a = self.evaluator.evaluate(req.id.trim(), &plugin, &lang)?;
        Ok(AssessmentResponse::new(&a, registry, self.pass_threshold))
    }

    pub fn evaluate_one(&self, key: &str, req: &EvaluationRequest) -> Result<Value, AppError> {
        let (plugin, lang) = self.target(req)?;
        let registry = self.evaluator.registry_for(&plugin)?;
        if registry.get(key).is_none() {
            return Err(AppError::new(
                ErrorClass::UnknownIndicator,
                format!("unknown indicator `{key}`"),
            ));
        }
        let r = self
            .evaluator
            .evaluate_indicator(req.id.trim(), &plugin, key, &lang)?;
        Ok(serde_json::to_value(indicator_block(&r, registry, self.pass_threshold)).unwrap())
    }

    pub fn spec(&self) -> Result<Value, AppError> {
        let registry = self.evaluator.registry_for(&self.default_plugin)?;
        let plugins: Vec<String> = self.evaluator.plugin_ids().map(String::from).collect();
        Ok(api_spec(registry, &plugins))
    }
}

impl IntoResponse for AppError {
    fn into_response(self) -> Response {
        let status = StatusCode::from_u16(self.class.http_status())
            .unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
        let body = json!({"error": self.class.as_str(), "message": self.message});
        (status, Json(body)).into_response()
    }
}

fn rejected(r: JsonRejection) -> AppError {
    AppError::new(ErrorClass::Usage, r.body_text())
}

async fn blocking<T: Send + 'static>(
    f: impl FnOnce() -> Result<T, AppError> + Send + 'static,
) -> Result<T, AppError> {
    tokio::task::spawn_blocking(f)
        .await
        .map_err(|e| AppError::new(ErrorClass::Internal, e.to_string()))?
}

async fn rda_all(
    State(state): State<Arc<AppState>>,
    body: Result<Json<EvaluationRequest>, JsonRejection>,
) -> Result<Json<AssessmentResponse>, AppError> {
    let Json(req) = body.map_err(rejected)?;
    blocking(move || state.evaluate_all(&req)).await.map(Json)
}

async fn rda_one(
    State(state): State<Arc<AppState>>,
    Path(key): Path<String>,
    body: Result<Json<EvaluationRequest>, JsonRejection>,
) -> Result<Json<Value>, AppError> {
    let Json(req) = body.map_err(rejected)?;
    blocking(move || state.evaluate_one(&key, &req))
        .await
        .map(Json)
}

async fn spec(State(state): State<Arc<AppState>>) -> Result<Json<Value>, AppError> {
    state.spec().map(Json)
}

async fn health(State(state): State<Arc<AppState>>) -> Json<Value> {
    let plugins: Vec<&str> = state.evaluator.plugin_ids().collect();
    let indicators = state
        .evaluator
        .registry_for(&state.default_plugin)
        .map(|r| r.len())
        .unwrap_or(0);
    Json(json!({
        "status": "ok",
        "version": env!("CARGO_PKG_VERSION"),
        "plugins": plugins,
        "indicators": indicators,
    }))
}

pub fn router(state: Arc<AppState>) -> Router {
    Router::new()
        .route(&format!("{API_PREFIX}/rda_all"), post(rda_all))
        .route(&format!("{API_PREFIX}/{{config_key}}"), post(rda_one))
        .route("/v1.0/api-spec", get(spec))
        .route("/health", get(health))
        .with_state(state)
}
