use std::io::Write;
use std::time::Duration;

use ncat_combinat::{Tally, Verdict};
use serde::Serialize;
use serde_json::Value;

use crate::{CliError, RunConfig};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Counts {
    pub checked: u64,
    pub failed: u64,
    pub undecided: u64,
}

/// Wall-clock time; the only field allowed to differ between identical runs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize)]
pub struct Timing {
    pub elapsed_ms: u64,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub suite: String,
    /// what the suite establishes, in words
    pub anchor: String,
    pub verdict: Verdict,
    pub counts: Counts,
    pub witnesses: Vec<String>,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub details: Value,
    pub config: RunConfig,
    pub timing: Timing,
}

impl Report {
    pub fn from_tally(suite: &str, anchor: &str, t: Tally, details: Value, config: &RunConfig, elapsed: Duration) -> Self {
        let verdict = Verdict::from(&t);
        let mut witnesses = t.witnesses;
        if verdict == Verdict::Fail && witnesses.is_empty() {
            witnesses.push(format!("{} failed cases, none recorded", t.failed));
        }
        Report {
            suite: suite.into(),
            anchor: anchor.into(),
            verdict,
            counts: Counts { checked: t.checked, failed: t.failed, undecided: t.undecided },
            witnesses,
            details,
            config: config.clone(),
            timing: Timing { elapsed_ms: elapsed.as_millis() as u64 },
        }
    }

    /// A run stopped by a bound: INCONCLUSIVE, naming the bound.
    pub fn stopped(suite: &str, anchor: &str, why: String, config: &RunConfig, elapsed: Duration) -> Self {
        let mut t = Tally::new();
        t.undecided(|| why);
        Self::from_tally(suite, anchor, t, Value::Null, config, elapsed)
    }

    /// A run that hit an error other than a bound: FAIL with the error.
    pub fn errored(suite: &str, anchor: &str, why: String, config: &RunConfig, elapsed: Duration) -> Self {
        let mut t = Tally::new();
        t.fail(|| why);
        Self::from_tally(suite, anchor, t, Value::Null, config, elapsed)
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }

    pub fn summary_line(&self) -> String {
        let c = self.counts;
        format!("{} {}: {} checked, {} failed, {} undecided ({} ms)", self.verdict, self.suite, c.checked, c.failed, c.undecided, self.timing.elapsed_ms)
    }
}

/// Every suite's report with the most severe verdict on top.
#[derive(Clone, Debug, Serialize)]
pub struct Aggregate {
    pub verdict: Verdict,
    pub config: RunConfig,
    pub reports: Vec<Report>,
}

impl Aggregate {
    pub fn new(config: &RunConfig, reports: Vec<Report>) -> Self {
        let verdict = reports.iter().map(|r| r.verdict).max().unwrap_or(Verdict::Pass);
        Aggregate { verdict, config: config.clone(), reports }
    }

    pub fn exit_code(&self) -> i32 {
        self.verdict.exit_code()
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    #[default]
    Json,
    /// one summary line per report
    Text,
}

/// Writes to `config.out` when set, else to stdout.
pub fn emit<T: Serialize>(value: &T, lines: &[String], format: Format, config: &RunConfig) -> Result<(), CliError> {
    let body = match format {
        Format::Json => serde_json::to_string_pretty(value)? + "\n",
        Format::Text => lines.iter().map(|l| format!("{l}\n")).collect(),
    };
    match &config.out {
        Some(path) => std::fs::write(path, body).map_err(|e| CliError::Io(path.display().to_string(), e)),
        None => std::io::stdout().write_all(body.as_bytes()).map_err(|e| CliError::Io("stdout".into(), e)),
    }
}
