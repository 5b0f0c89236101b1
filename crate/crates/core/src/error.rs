use thiserror::Error;

/// Failure modes shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A documented precondition of a bound does not hold.
    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("out of domain: {0}")]
    OutOfDomain(String),
    #[error("outside the level set: {0}")]
    OutOfLevelSet(String),
    /// Identically vanishing slice polynomial (a probability-zero event).
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    /// A sampled check whose event was too rare or too common to test.
    #[error("inconclusive: {0}")]
    Inconclusive(String),
    /// A root landed inside the guard band of a disc boundary.
    #[error("indeterminate: {0}")]
    Indeterminate(String),
    #[error("spacing violated: {0}")]
    SpacingViolated(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// True for errors that mean "a stated hypothesis failed" rather than bad input.
    pub fn is_hypothesis(&self) -> bool {
        matches!(
            self,
            Error::HypothesisViolated(_) | Error::OutOfDomain(_) | Error::OutOfLevelSet(_) | Error::SpacingViolated(_)
        )
    }
}
