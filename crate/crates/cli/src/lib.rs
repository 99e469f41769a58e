//! Batch front end for `fpinv-core`: read a job file, run one command, emit a
//! deterministic result document.

pub mod job;
pub mod plain;
pub mod run;

pub use job::{Command, JobSpec};
pub use run::{run_job, run_job_with_progress, ResultDocument};

use thiserror::Error;

/// Every way a job can fail, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Io(String),
    #[error("{0}")]
    Precondition(String),
    #[error("{message}")]
    Cap {
        message: String,
        /// Whatever was computed soundly before the cap hit.
        partial: Option<Box<ResultDocument>>,
    },
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Usage(_) | CliError::Io(_) => 2,
            CliError::Precondition(_) => 3,
            CliError::Cap { .. } => 4,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Parse { .. } => "parse",
            CliError::Usage(_) => "usage",
            CliError::Io(_) => "io",
            CliError::Precondition(_) => "precondition",
            CliError::Cap { .. } => "resource-cap",
        }
    }

    /// `error[kind]: message` on a single line.
    pub fn reason(&self) -> String {
        let msg = self.to_string().replace(['\n', '\r'], " ");
        format!("error[{}]: {}", self.kind(), msg.trim())
    }
}

impl From<fpinv_core::Error> for CliError {
    fn from(e: fpinv_core::Error) -> Self {
        use fpinv_core::Error as E;
        match e {
            E::Overflow(_) | E::NoStableExponent { .. } => CliError::Cap {
                message: e.to_string(),
                partial: None,
            },
            E::MalformedLambda(_) => {
                CliError::Precondition(format!("{e}; test-ideal takes n/p^e, use fjn to locate other values"))
            }
            other => CliError::Precondition(other.to_string()),
        }
    }
}
