use thiserror::Error;

/// Errors produced by the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite value {value} at point {point:?}")]
    NonFinite { point: Vec<f64>, value: f64 },

    #[error("degenerate direction {direction:?}: G vanishes or the index ratio is not finite at radius {radius}")]
    DegenerateDirection { direction: Vec<f64>, radius: f64 },

    #[error("conjugate not localized: search radius exceeded {radius:e} without boundary decrease")]
    ConjugateNotLocalized { radius: f64 },

    #[error("conjugate not certified: gap {gap:e} exceeds tolerance {tol:e}")]
    ConjugateNotCertified { gap: f64, tol: f64 },

    #[error("radial minorant does not reach level {level} below radius cap {cap:e}")]
    MinorantCapReached { level: f64, cap: f64 },

    #[error("unknown G-function '{name}'; registered: {known}")]
    UnknownGFunction { name: String, known: String },

    #[error("unknown problem '{name}'; registered: {known}")]
    UnknownProblem { name: String, known: String },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("Luxemburg bracket exceeded 2^60 (modular stays above 1)")]
    NormBracket,

    #[error("no negative endpoint found up to xi = {xi:e}")]
    NoNegativeEndpoint { xi: f64 },

    #[error("linear solve failed: {0}")]
    Singular(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    pub(crate) fn param(name: &str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name: name.to_string(), reason: reason.into() }
    }
}
