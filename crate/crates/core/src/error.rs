use thiserror::Error;

/// Errors raised by the exact engine and the sampling oracle.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("division by the zero rational function")]
    DivisionByZero,

    #[error("rational function has a pole at p = {0}")]
    Pole(String),

    #[error("cannot parse rational function {input:?}: {reason}")]
    Parse { input: String, reason: String },

    #[error("series operation requires constant term 1, found {0}")]
    ConstantTermNotOne(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A relation that must hold by construction failed; indicates a bug.
    #[error("internal consistency fault: {0}")]
    Internal(String),

    #[error("serialization failed: {0}")]
    Serialization(String),

    #[error("enumeration of {needed} samples exceeds the budget of {budget}")]
    BudgetExceeded { needed: u128, budget: u128 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Serialization(e.to_string())
    }
}
