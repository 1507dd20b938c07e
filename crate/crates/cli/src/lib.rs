//! Batch front end for `freeplate-core`: JSON experiment configs in, CSV
//! and JSON reports out.
//!
//! Exit codes: 0 when every enabled check passes, 1 when a check fails,
//! 2 on a configuration error.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod pipeline;
pub mod report;

use freeplate_core::Error as CoreError;

pub use config::{Check, ExperimentConfig};
pub use pipeline::{run, Outcome, VerifyRow};

#[derive(Debug)]
pub enum CliError {
    Config(String),
    Io(String),
    Failed(String),
    Core(CoreError),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Config(_) | CliError::Io(_) => 2,
            CliError::Failed(_) => 1,
            CliError::Core(e) => match e {
                CoreError::InvalidArgument(_)
                | CoreError::InvalidDomain(_)
                | CoreError::OutOfRange(_)
                | CoreError::UnsupportedOracle(_)
                | CoreError::BelowThreshold { .. }
                | CoreError::PreconditionViolated(_) => 2,
                _ => 1,
            },
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Config(msg) => write!(f, "config error: {msg}"),
            CliError::Io(msg) => write!(f, "output error: {msg}"),
            CliError::Failed(msg) => write!(f, "check failed: {msg}"),
            CliError::Core(e) => write!(f, "{e}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        CliError::Core(e)
    }
}
