use std::fmt;

use fair_assess_core::EvaluationError;

/// Error classes shared by the HTTP status mapping and the CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    /// Malformed request or command line.
    Usage,
    /// Unreadable or invalid configuration.
    Config,
    /// No metadata source reachable, or the HTTP client failed.
    Network,
    UnknownPlugin,
    UnknownIndicator,
    Internal,
}

impl ErrorClass {
    pub fn exit_code(self) -> u8 {
        match self {
            Self::Usage | Self::Config | Self::Internal => 1,
            Self::Network => 2,
            Self::UnknownPlugin | Self::UnknownIndicator => 3,
        }
    }

    pub fn http_status(self) -> u16 {
        match self {
            Self::Usage => 400,
            Self::UnknownPlugin | Self::UnknownIndicator => 404,
            Self::Network => 502,
            Self::Config | Self::Internal => 500,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Usage => "bad_request",
            Self::Config => "configuration",
            Self::Network => "harvest_failure",
            Self::UnknownPlugin => "unknown_plugin",
            Self::UnknownIndicator => "unknown_indicator",
            Self::Internal => "internal",
        }
    }
}

/// Exit code for a batch where some identifiers failed.
pub const EXIT_PARTIAL: u8 = 4;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AppError {
    pub class: ErrorClass,
    pub message: String,
}

impl AppError {
    pub fn new(class: ErrorClass, message: impl Into<String>) -> Self {
        Self {
            class,
            message: message.into(),
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl std::error::Error for AppError {}

impl From<EvaluationError> for AppError {
    fn from(e: EvaluationError) -> Self {
        let class = match &e {
            EvaluationError::UnknownPlugin(_) => ErrorClass::UnknownPlugin,
            EvaluationError::UnknownIndicator(_) => ErrorClass::UnknownIndicator,
            EvaluationError::EmptyIdentifier => ErrorClass::Usage,
            EvaluationError::HarvestFailure(_) => ErrorClass::Network,
            EvaluationError::Config(_) | EvaluationError::Feedback(_) => ErrorClass::Config,
            _ => ErrorClass::Internal,
        };
        Self::new(class, e.to_string())
    }
}
