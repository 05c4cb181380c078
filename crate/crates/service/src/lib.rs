//! HTTP API and command-line front end for the FAIR assessment engine.

pub mod api;
pub mod batch;
pub mod error;
pub mod openapi;
pub mod report;
pub mod response;
pub mod settings;

pub use api::{router, AppState, EvaluationRequest};
pub use error::{AppError, ErrorClass};
pub use response::{AssessmentResponse, IndicatorBlock};
pub use settings::ServiceConfig;
