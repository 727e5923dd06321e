//! Command-line front end for torsorkit: a JSON presentation format,
//! named gallery recipes and the `torsorkit` subcommands.

pub mod commands;
pub mod format;
pub mod recipes;

use thiserror::Error;

pub use commands::run;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_FAIL: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{path}: {message}")]
    Format { path: String, message: String },

    #[error("{path}: index {index} out of range for dimension {dim}")]
    IndexOutOfRange { path: String, index: usize, dim: usize },

    #[error("unsupported format_version {0}")]
    UnsupportedVersion(u64),

    #[error("{path}: {message}")]
    Io { path: String, message: String },

    #[error("{0}")]
    Usage(String),

    #[error("fingerprint mismatch: {0}")]
    Fingerprint(String),

    #[error(transparent)]
    Core(#[from] torsorkit::Error),
}

impl CliError {
    /// 1 for mathematical failures, 2 for anything wrong with the input.
    pub fn exit_code(&self) -> i32 {
        use torsorkit::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Parse { .. }
                | E::ModulusMismatch(..)
                | E::BadModulus(_)
                | E::ArityMismatch(_)
                | E::Shape(_)
                | E::BadPermutation(_)
                | E::LegCapExceeded { .. }
                | E::DimensionCap { .. }
                | E::SearchSpaceTooLarge { .. }
                | E::BadCharacteristic(_) => EXIT_INPUT,
                _ => EXIT_FAIL,
            },
            _ => EXIT_INPUT,
        }
    }
}
