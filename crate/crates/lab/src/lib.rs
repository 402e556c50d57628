//! Command-line plumbing for `krivine-lab-core`: term input, text and JSON
//! reports, and the verification suites.

use std::path::PathBuf;

use krivine_lab_core::ParseError;

pub mod input;
pub mod report;
pub mod verify;

#[derive(Debug, thiserror::Error)]
pub enum LabError {
    #[error("syntax error in {input:?}: {error}")]
    Syntax { input: String, error: ParseError },
    #[error("cannot read {}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Usage(String),
    /// An error reported by a core operation, such as a non-normal term
    /// given to the predictor.
    #[error("{0}")]
    Domain(String),
}

impl LabError {
    /// 1 for domain errors, 2 for bad input.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::Domain(_) => 1,
            LabError::Syntax { .. } | LabError::Io { .. } | LabError::Usage(_) => 2,
        }
    }

    pub fn domain(e: impl std::fmt::Display) -> LabError {
        LabError::Domain(e.to_string())
    }
}
