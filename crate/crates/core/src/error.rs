use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One failed check inside a structured document, with a dotted path to the
/// offending node (e.g. `matrices.ECR.values[2][5]`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Issue {
    pub path: String,
    pub message: String,
}

impl Issue {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for Issue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.path.is_empty() {
            f.write_str(&self.message)
        } else {
            write!(f, "{}: {}", self.path, self.message)
        }
    }
}

fn join_issues(issues: &[Issue]) -> String {
    issues
        .iter()
        .map(|i| i.to_string())
        .collect::<Vec<_>>()
        .join("; ")
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid interval [{lo}, {hi}]")]
    InvalidInterval { lo: f64, hi: f64 },

    #[error("scale factor must be non-negative, got {0}")]
    NegativeScale(f64),

    #[error("{what} = {value} is outside [{lo}, {hi}]")]
    OutOfRange {
        what: String,
        value: f64,
        lo: f64,
        hi: f64,
    },

    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("infeasible parameters: {0}")]
    Infeasible(String),

    #[error("numeric failure: {0}")]
    Numeric(String),

    #[error("incomplete input, missing: {}", .0.join(", "))]
    IncompleteInput(Vec<String>),

    #[error("validation failed: {}", join_issues(.0))]
    Validation(Vec<Issue>),

    #[error("malformed {format}: {message}")]
    Parse { format: &'static str, message: String },

    #[error("{}: {source}", .path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation(vec![Issue::new(path, message)])
    }

    pub fn out_of_range(what: impl Into<String>, value: f64, lo: f64, hi: f64) -> Self {
        Error::OutOfRange {
            what: what.into(),
            value,
            lo,
            hi,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(format: &'static str, err: serde_json::Error) -> Self {
        Error::Parse {
            format,
            message: err.to_string(),
        }
    }

    /// True for failures caused by the caller's input rather than by a bug.
    pub fn is_input_error(&self) -> bool {
        !matches!(self, Error::Numeric(_))
    }
}
