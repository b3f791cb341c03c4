use thiserror::Error;

/// Failure modes shared by every module in the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("invalid distribution: {0}")]
    InvalidDistribution(&'static str),

    #[error("invalid observable: {0}")]
    InvalidObservable(&'static str),

    /// Absolute continuity fails at `index`, so the divergence is infinite.
    #[error("divergence undefined: absolute continuity fails at index {index}")]
    Undefined { index: usize },

    #[error("invalid parameter `{name}`: {reason}")]
    Parameter {
        name: &'static str,
        reason: &'static str,
    },

    #[error("argument {value} outside the domain (-{bound}, {bound})")]
    Domain { value: f64, bound: f64 },

    #[error("cumulant generating function is not finite for any positive argument")]
    UnboundedObservable,

    #[error("structure error: {0}")]
    Structure(&'static str),

    #[error("problem too large: {states} states exceeds the cap of {cap}")]
    TooLarge { states: u128, cap: u128 },

    #[error("numerical failure: {0}")]
    Numeric(&'static str),

    #[error("unsupported combination: {0}")]
    Unsupported(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_len(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::Dimension { expected, found })
    }
}
