//! Configuration-driven scenario runs and their output tables.

mod config;
mod run;
mod tables;

pub use config::{Scenario, ScenarioConfig};
pub use run::{build_ivp, gaussian_data, run, RunOutput, RunSummary};
pub use tables::{emit_tables, format_summary, read_report_csv, write_report_csv, CSV_HEADER};

use crate::error::Error;

/// Failure categories of the experiment layer, each with a process exit code.
#[derive(Clone, Debug, PartialEq, thiserror::Error)]
pub enum ExperimentError {
    /// Line 0 means the problem is not tied to a single line.
    #[error("{}", config_message(*.line, .message))]
    Config { line: usize, message: String },
    #[error("i/o error: {0}")]
    Io(String),
    #[error("Picard iteration did not converge at t = {t}")]
    NonConvergence { t: f64 },
}

fn config_message(line: usize, message: &str) -> String {
    if line == 0 {
        format!("config error: {message}")
    } else {
        format!("config error at line {line}: {message}")
    }
}

impl ExperimentError {
    pub fn config(line: usize, message: impl Into<String>) -> Self {
        ExperimentError::Config {
            line,
            message: message.into(),
        }
    }

    /// 1 for I/O, 2 for non-convergence, 3 for configuration problems.
    pub fn exit_code(&self) -> i32 {
        match self {
            ExperimentError::Io(_) => 1,
            ExperimentError::NonConvergence { .. } => 2,
            ExperimentError::Config { .. } => 3,
        }
    }
}

impl From<Error> for ExperimentError {
    fn from(e: Error) -> Self {
        match e {
            Error::Io(m) => ExperimentError::Io(m),
            Error::NonConvergence { t, .. } => ExperimentError::NonConvergence { t },
            Error::Parse { line, message } => ExperimentError::Config { line, message },
            other => ExperimentError::config(0, other.to_string()),
        }
    }
}

impl From<std::io::Error> for ExperimentError {
    fn from(e: std::io::Error) -> Self {
        ExperimentError::Io(e.to_string())
    }
}
