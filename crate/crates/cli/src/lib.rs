//! Batch driver: verification suites, computations and their JSON reports.

pub mod config;
pub mod report;
pub mod suites;

pub use config::RunConfig;
pub use report::{Aggregate, Format, Report};
pub use suites::{run_all, run_suite, SUITES};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("bad configuration: {0}")]
    BadConfig(String),
    #[error("bad input: {0}")]
    Input(String),
    #[error("cannot write {0}: {1}")]
    Io(String, #[source] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Suite(#[from] suites::SuiteError),
}
