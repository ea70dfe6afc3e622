use thiserror::Error;

/// Errors raised while building or evaluating games, strategies and tables.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("path index {index} out of range 1..={m}")]
    PathOutOfRange { index: usize, m: usize },

    #[error("invalid game configuration: {0}")]
    InvalidConfig(String),

    #[error("{what} is not normalized (total = {total})")]
    NotNormalized { what: &'static str, total: f64 },

    #[error("probability {0} lies outside [0, 1]")]
    ProbabilityOutOfRange(f64),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("m = {m} exceeds the enumeration limit of {limit}")]
    EnumerationLimit { m: usize, limit: usize },

    #[error("invalid strategy: {0}")]
    InvalidStrategy(String),

    #[error("at least one trial is required")]
    ZeroTrials,
}

impl Error {
    /// True for failures caused by numerically invalid inputs (unnormalized
    /// states, tables or weights) rather than malformed requests.
    pub fn is_numerical(&self) -> bool {
        matches!(self, Error::NotNormalized { .. } | Error::ProbabilityOutOfRange(_))
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
