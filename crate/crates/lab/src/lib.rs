//! Scenario runner for `kfp-core`: config files, report formats, the
//! `kfp` command line and the acceptance harness behind `verify-all`.

pub mod commands;
pub mod output;
pub mod scenario;
pub mod setup;
pub mod verify;

use thiserror::Error;

pub use scenario::{ParseError, Scenario};

/// The half-line benchmark shipped with the binary.
pub const BENCHMARK: &str = include_str!("../scenarios/half_line.cfg");

#[derive(Debug, Error)]
pub enum LabError {
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("{0}")]
    Core(#[from] kfp_core::Error),
    #[error("i/o: {0}")]
    Io(#[from] std::io::Error),
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("{0}")]
    Usage(String),
    /// A verification property was violated.
    #[error("assertion failed: {0}")]
    Assertion(String),
}

impl LabError {
    /// 2 for violated properties, 1 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Assertion(_) => 2,
            _ => 1,
        }
    }
}
