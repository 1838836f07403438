use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("series is empty")]
    EmptySeries,
    #[error("negative value {value} at t={t}")]
    NegativeValue { t: usize, value: f64 },
    #[error("non-finite value at t={t}")]
    NonFiniteValue { t: usize },
    #[error("length mismatch: actual has {actual} steps, forecast has {forecast}")]
    LengthMismatch { actual: usize, forecast: usize },
    #[error("invalid cost parameters: {0}")]
    InvalidParams(String),
    #[error("invalid config field `{field}`: {reason}")]
    InvalidConfig { field: String, reason: String },
    #[error("window {window} exceeds series length {n}")]
    WindowTooLarge { window: usize, n: usize },
    #[error("at least two groups are required, got {0}")]
    TooFewGroups(usize),
    #[error("group {group} has {size} observations, at least two are required")]
    GroupTooSmall { group: usize, size: usize },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("invalid degrees of freedom ({d1}, {d2})")]
    InvalidDegreesOfFreedom { d1: f64, d2: f64 },
    #[error("line {line}: malformed row: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("line {line}: expected t={expected}, found t={found}")]
    NonContiguousTime { line: u64, expected: u64, found: u64 },
    #[error("missing or wrong header, expected `t,actual,forecast`")]
    MissingHeader,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidConfig {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True when the error stems from user input rather than a fault in the tool.
    pub fn is_user_error(&self) -> bool {
        !matches!(self, Error::Json(e) if e.is_io())
    }
}
