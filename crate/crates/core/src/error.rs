use std::path::PathBuf;

use chrono::NaiveDate;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("invalid ticker symbol {0:?}")]
    InvalidTicker(String),
    #[error("duplicate ticker {0}")]
    DuplicateTicker(String),
    #[error("missing file for ticker {ticker}: {path}")]
    MissingFile { ticker: String, path: PathBuf },
    #[error("{path}: {message}")]
    Malformed { path: PathBuf, message: String },
    #[error("start date {start} is after end date {end}")]
    InvalidRange { start: NaiveDate, end: NaiveDate },
    #[error("only {found} common dates, at least {required} are required")]
    InsufficientHistory { found: usize, required: usize },
    #[error("invalid table: {0}")]
    InvalidTable(String),

    #[error("empty input")]
    EmptyInput,
    #[error("need at least {required} values, got {found}")]
    TooFewValues { found: usize, required: usize },
    #[error("length mismatch: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("zero variance in {0}")]
    ZeroVariance(String),
    #[error("lag {lag} leaves fewer than 2 points in a series of length {len}")]
    LagTooLarge { lag: usize, len: usize },
    #[error("invalid lag: {0}")]
    InvalidLag(String),

    #[error("threshold {0} outside [0, 1]")]
    ThresholdOutOfRange(f64),
    #[error("invalid correlation matrix: {0}")]
    InvalidMatrix(String),
    #[error("no clique of size >= 2 at this threshold")]
    NoClique,

    #[error("unknown ticker {0}")]
    UnknownTicker(String),
    #[error("no share count for ticker {0}")]
    MissingShares(String),
    #[error("invalid rule: {0}")]
    InvalidRule(String),
    #[error("day {day} is before the warmup of {warmup} days")]
    BeforeWarmup { day: usize, warmup: usize },
}
