use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Caller supplied arguments that violate an operation's preconditions.
    #[error("invalid input: {0}")]
    Input(String),
    /// A structure would exceed a configured size limit.
    #[error("capacity exceeded: {0}")]
    Capacity(String),
    /// A search ran out of its node budget before reaching a verdict.
    #[error("search budget of {budget} nodes exhausted")]
    Budget { budget: u64 },
    /// Flooring a prescribed set size produced an empty set.
    #[error("degenerate input: {0}")]
    Degenerate(String),
    /// A formula was evaluated outside its domain.
    #[error("domain error: {0}")]
    Domain(String),
    /// An internal guarantee did not hold; indicates a bug or an impossible input.
    #[error("structural failure: {0}")]
    Structural(String),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Short machine-readable tag for the error variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Input(_) => "input",
            Error::Capacity(_) => "capacity",
            Error::Budget { .. } => "budget",
            Error::Degenerate(_) => "degenerate",
            Error::Domain(_) => "domain",
            Error::Structural(_) => "structural",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
