//! Command-line front end: instance analysis, confusion-graph statistics
//! and the built-in fixture checks.

pub mod commands;
pub mod fixtures;
pub mod report;

use icleak_core::fitting::SearchError;
use icleak_core::leakage::LeakageError;
use icleak_core::rate::RateError;
use icleak_core::{GraphError, InstanceError};
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_LIMITS: i32 = 3;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error("invalid instance: {0}")]
    Parse(InstanceError),
    #[error("invalid arguments: {0}")]
    Usage(String),
    #[error("limit exceeded: {0}")]
    Limits(String),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io { .. } | CliError::Parse(_) | CliError::Usage(_) => EXIT_PARSE,
            CliError::Limits(_) => EXIT_LIMITS,
            CliError::Failed(_) => EXIT_VERIFY_FAILED,
        }
    }
}

impl From<GraphError> for CliError {
    fn from(e: GraphError) -> Self {
        match e {
            GraphError::VertexCap { .. } => CliError::Limits(e.to_string()),
            GraphError::FieldMismatch(..) => CliError::Usage(e.to_string()),
        }
    }
}

impl From<SearchError> for CliError {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::TooManyFreeCells { .. } => CliError::Limits(e.to_string()),
            _ => CliError::Usage(e.to_string()),
        }
    }
}

impl From<RateError> for CliError {
    fn from(e: RateError) -> Self {
        match e {
            RateError::Graph(g) => g.into(),
            RateError::Search(s) => s.into(),
            RateError::TooManyMessages { .. } => CliError::Limits(e.to_string()),
        }
    }
}

impl From<LeakageError> for CliError {
    fn from(e: LeakageError) -> Self {
        match e {
            LeakageError::TupleCap { .. } | LeakageError::NodeBudget(_) => CliError::Limits(e.to_string()),
            LeakageError::Graph(g) => g.into(),
            LeakageError::Rate(r) => r.into(),
            other => CliError::Failed(other.to_string()),
        }
    }
}
