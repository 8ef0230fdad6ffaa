//! Application-level errors: everything the expression layer, file
//! formats, and CLI can report, with the exit-code policy in one place.

use std::fmt;

use crate::expr::ParseError;

#[derive(Debug)]
pub enum AppError {
    /// Domain failure from the core library (exit code 1).
    Core(weier4_core::Error),
    /// Expression error; syntax and unknown identifiers are usage errors
    /// (exit code 2), expansion failures are domain errors (exit code 1).
    Parse(ParseError),
    Io(std::io::Error),
    /// Invalid data or parameters discovered while running (exit code 1).
    Invalid(String),
    /// Mesh formats need three coordinates; the chosen format/projection
    /// combination cannot be written (exit code 2).
    UnsupportedProjection,
    /// Malformed invocation: bad flags, bad flag syntax (exit code 2).
    Usage(String),
}

impl AppError {
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Usage(_) => 2,
            AppError::UnsupportedProjection => 2,
            AppError::Parse(ParseError::Syntax { .. }) => 2,
            AppError::Parse(ParseError::UnknownIdentifier { .. }) => 2,
            _ => 1,
        }
    }
}

impl fmt::Display for AppError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AppError::Core(e) => write!(f, "{e}"),
            AppError::Parse(e) => write!(f, "{e}"),
            AppError::Io(e) => write!(f, "io error: {e}"),
            AppError::Invalid(msg) => write!(f, "{msg}"),
            AppError::UnsupportedProjection => write!(
                f,
                "this format needs three coordinates; pick a projection (xyz, xyw, xzw, yzw)"
            ),
            AppError::Usage(msg) => write!(f, "{msg}"),
        }
    }
}

impl std::error::Error for AppError {}

impl From<weier4_core::Error> for AppError {
    fn from(e: weier4_core::Error) -> Self {
        AppError::Core(e)
    }
}

impl From<ParseError> for AppError {
    fn from(e: ParseError) -> Self {
        AppError::Parse(e)
    }
}

impl From<std::io::Error> for AppError {
    fn from(e: std::io::Error) -> Self {
        AppError::Io(e)
    }
}

pub type AppResult<T> = Result<T, AppError>;
