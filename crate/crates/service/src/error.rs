use std::fmt;

use axum::http::StatusCode;
use axum::response::{IntoResponse, Response};
use axum::Json;
use corrgraph_core::Error as CoreError;
use serde::{Deserialize, Serialize};

/// Stable, machine-readable error codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ErrorCode {
    InvalidRequest,
    UnknownTicker,
    MissingShares,
    DatasetNotFound,
    DatasetExists,
    MissingFile,
    InvalidData,
    InsufficientHistory,
    DegenerateSeries,
    NoClique,
    Internal,
}

/// What kind of failure a code represents; drives CLI exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Data,
    Analysis,
}

impl ErrorCode {
    pub const ALL: [ErrorCode; 11] = [
        ErrorCode::InvalidRequest,
        ErrorCode::UnknownTicker,
        ErrorCode::MissingShares,
        ErrorCode::DatasetNotFound,
        ErrorCode::DatasetExists,
        ErrorCode::MissingFile,
        ErrorCode::InvalidData,
        ErrorCode::InsufficientHistory,
        ErrorCode::DegenerateSeries,
        ErrorCode::NoClique,
        ErrorCode::Internal,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCode::InvalidRequest => "invalid_request",
            ErrorCode::UnknownTicker => "unknown_ticker",
            ErrorCode::MissingShares => "missing_shares",
            ErrorCode::DatasetNotFound => "dataset_not_found",
            ErrorCode::DatasetExists => "dataset_exists",
            ErrorCode::MissingFile => "missing_file",
            ErrorCode::InvalidData => "invalid_data",
            ErrorCode::InsufficientHistory => "insufficient_history",
            ErrorCode::DegenerateSeries => "degenerate_series",
            ErrorCode::NoClique => "no_clique",
            ErrorCode::Internal => "internal",
        }
    }

    pub fn status(self) -> StatusCode {
        match self {
            ErrorCode::InvalidRequest | ErrorCode::UnknownTicker | ErrorCode::MissingShares => StatusCode::BAD_REQUEST,
            ErrorCode::DatasetNotFound => StatusCode::NOT_FOUND,
            ErrorCode::DatasetExists => StatusCode::CONFLICT,
            ErrorCode::MissingFile
            | ErrorCode::InvalidData
            | ErrorCode::InsufficientHistory
            | ErrorCode::DegenerateSeries
            | ErrorCode::NoClique => StatusCode::UNPROCESSABLE_ENTITY,
            ErrorCode::Internal => StatusCode::INTERNAL_SERVER_ERROR,
        }
    }

    pub fn class(self) -> ErrorClass {
        match self {
            ErrorCode::InvalidRequest
            | ErrorCode::UnknownTicker
            | ErrorCode::MissingShares
            | ErrorCode::DatasetNotFound
            | ErrorCode::DatasetExists => ErrorClass::Usage,
            ErrorCode::MissingFile | ErrorCode::InvalidData | ErrorCode::InsufficientHistory => ErrorClass::Data,
            ErrorCode::DegenerateSeries | ErrorCode::NoClique | ErrorCode::Internal => ErrorClass::Analysis,
        }
    }
}

impl fmt::Display for ErrorCode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Error body returned by every endpoint: `{"code": ..., "message": ...}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ApiError {
    pub code: ErrorCode,
    pub message: String,
}

impl ApiError {
    pub fn new(code: ErrorCode, message: impl Into<String>) -> Self {
        ApiError {
            code,
            message: message.into(),
        }
    }

    pub fn invalid(message: impl Into<String>) -> Self {
        Self::new(ErrorCode::InvalidRequest, message)
    }
}

impl fmt::Display for ApiError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.code, self.message)
    }
}

impl std::error::Error for ApiError {}

impl From<CoreError> for ApiError {
    fn from(err: CoreError) -> Self {
        let code = match &err {
            CoreError::InvalidTicker(_)
            | CoreError::DuplicateTicker(_)
            | CoreError::InvalidRange { .. }
            | CoreError::EmptyInput
            | CoreError::InvalidLag(_)
            | CoreError::ThresholdOutOfRange(_)
            | CoreError::InvalidRule(_) => ErrorCode::InvalidRequest,
            CoreError::UnknownTicker(_) => ErrorCode::UnknownTicker,
            CoreError::MissingShares(_) => ErrorCode::MissingShares,
            CoreError::MissingFile { .. } => ErrorCode::MissingFile,
            CoreError::Malformed { .. } | CoreError::InvalidTable(_) => ErrorCode::InvalidData,
            CoreError::InsufficientHistory { .. } => ErrorCode::InsufficientHistory,
            CoreError::TooFewValues { .. }
            | CoreError::LengthMismatch { .. }
            | CoreError::ZeroVariance(_)
            | CoreError::LagTooLarge { .. }
            | CoreError::BeforeWarmup { .. } => ErrorCode::DegenerateSeries,
            CoreError::NoClique => ErrorCode::NoClique,
            CoreError::InvalidMatrix(_) => ErrorCode::Internal,
        };
        ApiError::new(code, err.to_string())
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        (self.code.status(), Json(self)).into_response()
    }
}
