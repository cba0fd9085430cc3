use thiserror::Error;

/// Errors raised by the bandit primitives, adversaries, calculators and the
/// evaluation harness.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("{what} {index} out of bounds (valid range {lo}..={hi})")]
    OutOfBounds {
        what: &'static str,
        index: usize,
        lo: usize,
        hi: usize,
    },

    #[error("contract violation: {0}")]
    ContractViolation(String),
}

impl Error {
    pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
