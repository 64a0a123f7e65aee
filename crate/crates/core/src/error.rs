use alloc::string::String;

/// Errors raised by the core algorithms.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("arity mismatch: {left} vs {right}")]
    ArityMismatch { left: u32, right: u32 },

    #[error("arity {0} out of range (1..={max})", max = crate::element::MAX_ARITY)]
    InvalidArity(u32),

    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    #[error("{what} exceeds capacity (limit {limit})")]
    Capacity { what: &'static str, limit: usize },

    #[error("malformed element literal {literal:?}: {reason}")]
    Parse {
        literal: String,
        reason: &'static str,
    },

    #[error("malformed gate: {0}")]
    MalformedGate(String),

    #[error("state dimension {found} does not match circuit dimension {expected}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("measurement collapsed onto a zero-norm branch")]
    ZeroNorm,

    #[error("promise violated: {0}")]
    PromiseViolation(String),
}

pub type Result<T, E = Error> = core::result::Result<T, E>;
