use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid nonlinearity: {0}")]
    InvalidNonlinearity(String),

    #[error("operation not applicable: {0}")]
    NotApplicable(String),

    #[error("initial data rejected: {0}")]
    InvalidInitial(String),

    #[error("argument out of range: {0}")]
    OutOfRange(String),

    #[error("bracket failure: {0}")]
    BracketFailure(String),

    #[error("degenerate window: {0}")]
    DegenerateWindow(String),

    #[error("step failed at t = {t}: {reason}")]
    StepFailure { t: f64, reason: String },

    #[error("config error at `{field}`: {message}")]
    Config { field: String, message: String },

    #[error("config parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            message: message.into(),
        }
    }

    /// Whether the failure is a scientific outcome rather than bad input.
    pub fn is_scientific(&self) -> bool {
        matches!(
            self,
            Error::BracketFailure(_) | Error::DegenerateWindow(_) | Error::StepFailure { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
