use thiserror::Error;

/// Errors reported by every fallible operation in the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("undecidable at {bits} bits of precision")]
    Undecidable { bits: u32 },
    #[error("undecidable at orbit step {step} ({bits} bits of precision)")]
    UndecidableAt { step: usize, bits: u32 },
    #[error("domain error: {0}")]
    Domain(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("evaluation point lies on a breakpoint of the density")]
    BreakpointHit,
    #[error("matching window is empty")]
    EmptyWindow,
    #[error("word too short: digit {needed} requested, {available} available")]
    InsufficientDigits { needed: usize, available: usize },
    #[error("fiber membership is ambiguous at the working precision")]
    FiberAmbiguous,
    #[error("structural lemma violated: {0}")]
    LemmaViolation(String),
    #[error("{0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn parse(msg: impl Into<String>) -> Self {
        Error::Parse(msg.into())
    }

    /// Attaches an orbit step to a bare precision failure.
    pub fn at_step(self, step: usize) -> Self {
        match self {
            Error::Undecidable { bits } => Error::UndecidableAt { step, bits },
            other => other,
        }
    }

    pub fn is_undecidable(&self) -> bool {
        matches!(self, Error::Undecidable { .. } | Error::UndecidableAt { .. })
    }
}
