//! Front end for `cuntz-core`: query documents, report formatting and the
//! golden example table.

pub mod commands;
pub mod document;
pub mod golden;
pub mod report;

use thiserror::Error;

pub use document::QueryDocument;
pub use report::{parse_block, Report};

#[derive(Debug, Error)]
pub enum CliError {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{path}: {message}")]
    Validation { path: String, message: String },
    #[error("{path}: {source}")]
    Operation {
        path: String,
        #[source]
        source: cuntz_core::Error,
    },
    #[error("{0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn parse(line: usize, message: impl Into<String>) -> Self {
        CliError::Parse {
            line,
            message: message.into(),
        }
    }

    pub fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        CliError::Validation {
            path: path.into(),
            message: message.into(),
        }
    }

    pub fn operation(path: impl Into<String>, source: cuntz_core::Error) -> Self {
        CliError::Operation {
            path: path.into(),
            source,
        }
    }
}
