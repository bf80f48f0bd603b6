use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("dimension mismatch: expected {expected:?}, found {found:?}")]
    DimensionMismatch {
        expected: Vec<usize>,
        found: Vec<usize>,
    },

    #[error("invalid density matrix: {0}")]
    InvalidState(String),

    #[error("adiabatic elimination outside its regime (|alpha| = {alpha:.3}, |beta| = {beta:.3})")]
    RegimeViolation { alpha: f64, beta: f64 },

    #[error("singular point: {0}")]
    Singular(String),

    #[error("root finder did not converge: {0}")]
    NoConvergence(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
