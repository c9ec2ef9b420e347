use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the toolkit.
///
/// Variants map onto the CLI exit-code contract through [`Error::exit_code`]:
/// model-execution failures exit 3, everything else is a user/config error (2).
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("parameter error: {0}")]
    Parameter(String),

    #[error("size error: {0}")]
    Size(String),

    #[error("dimension error: requested {requested} dimensions, table supports {supported}")]
    Dimension { requested: usize, supported: usize },

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("range error at row {row}, column {column}: value {value} outside [0, 1]")]
    Range { row: usize, column: usize, value: f64 },

    #[error("correlation target is not positive definite: leading minor of order {order} is not positive")]
    NotPositiveDefinite { order: usize },

    #[error("collinear design: column `{column}` is linearly dependent on {depends_on:?}")]
    Collinear { column: String, depends_on: Vec<String> },

    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },

    #[error("unknown function `{name}` at byte {offset}")]
    UnknownFunction { name: String, offset: usize },

    #[error("unbound name `{0}`")]
    UnboundName(String),

    #[error("design mismatch: {0}")]
    DesignMismatch(String),

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("external model failed (exit code {code:?}): {stderr}")]
    ExternalFailed { code: Option<i32>, stderr: String },

    #[error("external model timed out after {secs} s")]
    ExternalTimeout { secs: f64 },

    #[error("row-count mismatch: expected {expected} rows, found {found}")]
    RowCount { expected: usize, found: usize },

    #[error("external model could not be started: {0}")]
    Spawn(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    /// Short machine-greppable tag printed as the prefix of CLI diagnostics.
    pub fn code(&self) -> &'static str {
        match self {
            Error::Domain(_) => "E_DOMAIN",
            Error::Parameter(_) => "E_PARAM",
            Error::Size(_) => "E_SIZE",
            Error::Dimension { .. } => "E_DIMENSION",
            Error::Parse { .. } => "E_PARSE",
            Error::Range { .. } => "E_RANGE",
            Error::NotPositiveDefinite { .. } => "E_NOT_PD",
            Error::Collinear { .. } => "E_COLLINEAR",
            Error::Syntax { .. } => "E_SYNTAX",
            Error::UnknownFunction { .. } => "E_UNKNOWN_FN",
            Error::UnboundName(_) => "E_UNBOUND",
            Error::DesignMismatch(_) => "E_DESIGN",
            Error::Unsupported(_) => "E_UNSUPPORTED",
            Error::Config(_) => "E_CONFIG",
            Error::ExternalFailed { .. } => "E_MODEL_EXIT",
            Error::ExternalTimeout { .. } => "E_MODEL_TIMEOUT",
            Error::RowCount { .. } => "E_ROWS",
            Error::Spawn(_) => "E_SPAWN",
            Error::Io { .. } => "E_IO",
            Error::Json(_) => "E_JSON",
        }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ExternalFailed { .. }
            | Error::ExternalTimeout { .. }
            | Error::RowCount { .. }
            | Error::Spawn(_) => 3,
            _ => 2,
        }
    }
}
