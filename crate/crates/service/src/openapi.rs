//! OpenAPI 3 description of the HTTP API, generated from the registry so
//! that every indicator endpoint carries its weight and priority.

use fair_assess_core::IndicatorRegistry;
use serde_json::{json, Map, Value};

pub const API_PREFIX: &str = "/v1.0/rda";

fn request_body() -> Value {
    json!({
        "required": true,
        "content": {"application/json": {"schema": {"$ref": "#/components/schemas/EvaluationRequest"}}}
    })
}

fn errors() -> Value {
    let e = |d: &str| json!({"description": d, "content": {"application/json": {"schema": {"$ref": "#/components/schemas/Error"}}}});
    json!({
        "400": e("Malformed request or empty identifier"),
        "404": e("Unknown plugin or indicator"),
        "502": e("No metadata source could be reached"),
        "500": e("Internal error"),
    })
}

pub fn api_spec(registry: &IndicatorRegistry, plugins: &[String]) -> Value {
    let mut paths = Map::new();
    let mut all_responses = errors();
    all_responses["200"] = json!({
        "description": "Full assessment",
        "content": {"application/json": {"schema": {"$ref": "#/components/schemas/Assessment"}}}
    });
    paths.insert(
        format!("{API_PREFIX}/rda_all"),
        json!({"post": {
            "operationId": "rda_all",
            "summary": "Evaluate all indicators",
            "requestBody": request_body(),
            "responses": all_responses,
        }}),
    );
    for ind in registry.indicators() {
        let mut responses = errors();
        responses["200"] = json!({
            "description": "Indicator result",
            "content": {"application/json": {"schema": {"$ref": "#/components/schemas/IndicatorResult"}}}
        });
        paths.insert(
            format!("{API_PREFIX}/{}", ind.config_key),
            json!({"post": {
                "operationId": ind.config_key,
                "summary": format!("{}: {}", ind.id, ind.description),
                "tags": [ind.group.name()],
                "x-indicator-id": ind.id.to_string(),
                "x-priority": ind.priority.to_string(),
                "x-weight": registry.weight(&ind.config_key),
                "x-excluded": registry.is_excluded(&ind.config_key),
                "x-dependency": ind.dependency,
                "requestBody": request_body(),
                "responses": responses,
            }}),
        );
    }
    json!({
        "openapi": "3.0.3",
        "info": {
            "title": "FAIR assessment API",
            "version": env!("CARGO_PKG_VERSION"),
        },
        "paths": paths,
        "components": {"schemas": {
            "EvaluationRequest": {
                "type": "object",
                "required": ["id"],
                "properties": {
                    "id": {"type": "string", "description": "DOI, Handle, URL or local identifier"},
                    "repo": {"type": "string", "enum": plugins, "description": "Plugin id"},
                    "lang": {"type": "string", "example": "en"},
                }
            },
            "Evidence": {"type": "object", "properties": {
                "check": {"type": "string"}, "observed": {"type": "string"}}},
            "IndicatorResult": {"type": "object", "properties": {
                "id": {"type": "string"},
                "config_key": {"type": "string"},
                "name": {"type": "string"},
                "group": {"type": "string"},
                "sub_principle": {"type": "string"},
                "indicator_level": {"type": "string", "enum": ["Essential", "Important", "Useful"]},
                "weight": {"type": "number"},
                "excluded": {"type": "boolean"},
                "points": {"type": "number", "minimum": 0, "maximum": 100},
                "passed": {"type": "boolean"},
                "technical_implementation": {"type": "string"},
                "technical_feedback": {"type": "string"},
                "tips": {"type": "string"},
                "evidence": {"type": "array", "items": {"$ref": "#/components/schemas/Evidence"}},
                "dependency": {"type": "string", "enum": ["RepositoryDependent", "MetadataDependent"]},
                "feedback_locale": {"type": "string"},
                "failed": {"type": "boolean"},
            }},
            "Assessment": {"type": "object", "properties": {
                "subject": {"type": "string"},
                "subject_kind": {"type": "string"},
                "plugin_id": {"type": "string"},
                "lang": {"type": "string"},
                "pass_threshold": {"type": "number"},
                "total_score": {"type": "number"},
                "group_scores": {"type": "object", "additionalProperties": {"type": "number"}},
                "indicators": {"type": "array", "items": {"$ref": "#/components/schemas/IndicatorResult"}},
                "harvest_notes": {"type": "array", "items": {"type": "string"}},
                "timing": {"type": "object"},
            }},
            "Error": {"type": "object", "properties": {
                "error": {"type": "string"}, "message": {"type": "string"}}},
        }}
    })
}
