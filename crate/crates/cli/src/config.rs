use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::CliError;

/// Bounds and knobs shared by every suite; echoed into each report.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RunConfig {
    /// largest ordinal in truncated index categories
    pub truncation: usize,
    /// enumeration budget: listed maps, partial action tables
    pub budget: u64,
    /// largest carrier, in elements, swept over the bimodule corpus
    pub cap: u64,
    pub jobs: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    pub seed: u64,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig { truncation: 3, budget: 1_000_000, cap: 64, jobs: 1, out: None, seed: 0 }
    }
}

impl RunConfig {
    pub fn validate(&self) -> Result<(), CliError> {
        let bounds = [("truncation", self.truncation as u64), ("budget", self.budget), ("cap", self.cap), ("jobs", self.jobs as u64)];
        match bounds.iter().find(|(_, v)| *v == 0) {
            Some((name, _)) => Err(CliError::BadConfig(format!("{name} must be positive"))),
            None => Ok(()),
        }
    }

    pub fn with_truncation(mut self, d: usize) -> Self {
        self.truncation = d;
        self
    }
}
