//! Error taxonomy of the frontend, with one stable exit code per class.

use std::fmt;
use tropic_core::Error as CoreError;

/// Everything that can go wrong between reading a document and emitting a
/// result. Each variant maps to a distinct process exit code; solver verdicts
/// ("no solution") are not errors and exit with code 1.
#[derive(Debug)]
pub enum CliError {
    /// Malformed JSON input (exit 2).
    Json(serde_json::Error),
    /// An entry token other than `"-inf"` / `"+inf"` (exit 2).
    InvalidToken(String),
    /// Inconsistent dimensions in the document (exit 3).
    Dimension(String),
    /// An unrecognized semifield tag (exit 4).
    UnknownSemifield(String),
    /// A value outside the semifield's carrier set (exit 5).
    Carrier(String),
    /// A field required by the command is missing (exit 6).
    MissingField(&'static str),
    /// Subset enumeration exceeds the configured cap (exit 7).
    Capacity(String),
    /// The instance cannot be plotted (exit 8).
    UnsupportedPlot(String),
    /// File input/output failed (exit 9).
    Io(std::io::Error),
    /// An invalid option value on the command line or in the document (exit 10).
    InvalidOption(String),
    /// A solver precondition is violated by the instance (exit 11).
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Json(_) | Self::InvalidToken(_) => 2,
            Self::Dimension(_) => 3,
            Self::UnknownSemifield(_) => 4,
            Self::Carrier(_) => 5,
            Self::MissingField(_) => 6,
            Self::Capacity(_) => 7,
            Self::UnsupportedPlot(_) => 8,
            Self::Io(_) => 9,
            Self::InvalidOption(_) => 10,
            Self::Precondition(_) => 11,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Json(e) => write!(f, "malformed JSON: {e}"),
            Self::InvalidToken(t) => {
                write!(
                    f,
                    "invalid entry token {t:?}; use a number, \"-inf\", or \"+inf\""
                )
            }
            Self::Dimension(msg) => write!(f, "dimension mismatch: {msg}"),
            Self::UnknownSemifield(tag) => write!(
                f,
                "unknown semifield {tag:?}; expected max-plus, min-plus, max-times, or min-times"
            ),
            Self::Carrier(msg) => write!(f, "value outside the carrier: {msg}"),
            Self::MissingField(name) => write!(f, "this command requires the field {name:?}"),
            Self::Capacity(msg) => write!(f, "{msg}"),
            Self::UnsupportedPlot(msg) => write!(f, "cannot plot: {msg}"),
            Self::Io(e) => write!(f, "i/o error: {e}"),
            Self::InvalidOption(msg) => write!(f, "invalid option: {msg}"),
            Self::Precondition(msg) => write!(f, "precondition violated: {msg}"),
        }
    }
}

impl std::error::Error for CliError {}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        Self::Json(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        Self::Io(e)
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        match e {
            CoreError::DimensionMismatch { .. } | CoreError::Empty => {
                Self::Dimension(e.to_string())
            }
            CoreError::CarrierViolation { .. } => Self::Carrier(e.to_string()),
            CoreError::CapacityExceeded { .. } => Self::Capacity(e.to_string()),
            other => Self::Precondition(other.to_string()),
        }
    }
}
