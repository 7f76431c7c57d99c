//! Experiment harness: configuration parsing, grid execution over
//! variants x environments x seeds, metrics CSVs, and summary reports.

pub mod config;
pub mod runner;
pub mod summary;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum HarnessError {
    /// Bad configuration; maps to exit code 1.
    #[error("config error: {0}")]
    Config(String),
    /// Anything that failed at run time; maps to exit code 2.
    #[error("runtime failure: {0}")]
    Runtime(String),
}

impl From<arise_core::Error> for HarnessError {
    fn from(e: arise_core::Error) -> Self {
        match e {
            arise_core::Error::Config(msg) => HarnessError::Config(msg),
            other => HarnessError::Runtime(other.to_string()),
        }
    }
}

impl From<std::io::Error> for HarnessError {
    fn from(e: std::io::Error) -> Self {
        HarnessError::Runtime(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, HarnessError>;

impl HarnessError {
    pub fn exit_code(&self) -> i32 {
        match self {
            HarnessError::Config(_) => 1,
            HarnessError::Runtime(_) => 2,
        }
    }
}
