//! Crate-wide error type.

use std::io;
use std::path::PathBuf;

/// Errors produced by the forecasting library.
#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Not enough observations for the requested operation.
    #[error("insufficient history: need at least {needed} observations, got {got}")]
    InsufficientHistory { needed: usize, got: usize },

    /// A centered moving-average window summed to zero or below, so
    /// seasonal ratios cannot be formed (typically an all-zero stretch).
    #[error("degenerate moving-average window for cycle length {cycle_len}")]
    DegenerateWindow { cycle_len: usize },

    /// The model already tracks a pattern with this cycle length.
    #[error("seasonal cycle of length {0} is already active")]
    DuplicateCycle(usize),

    /// Autocorrelation lag must leave at least one overlapping pair.
    #[error("lag {lag} must be smaller than the series length {len}")]
    LagTooLarge { lag: usize, len: usize },

    /// A metric was requested over zero pairs.
    #[error("no forecast/outcome pairs to evaluate")]
    EmptyInput,

    /// Output emission was requested for a report with no records.
    #[error("report contains no forecast records")]
    EmptyReport,

    /// Configuration rejected before running.
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    /// I/O failure with the offending path attached.
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    /// Unparseable input data.
    #[error("{}:{line}: {message}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
