use thiserror::Error;

/// Errors produced by the triangle, tracking, m-adic and expansion routines.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("internal invariant violated: {0}")]
    InvariantViolation(String),

    #[error("cell value overflowed u64 at row {row}")]
    Overflow { row: u64 },

    #[error("{num}/{den} is not in D_{m}: denominator shares a factor with {m}")]
    NotInDm { m: u64, num: String, den: String },

    #[error("operands use different bases ({left} and {right})")]
    MixedBase { left: u64, right: u64 },

    #[error("seed {seed} is not a square root of {c} modulo {m}")]
    InvalidSeed { m: u64, c: String, seed: String },

    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error("need {needed} digits but only {available} are available")]
    InsufficientDigits { needed: usize, available: usize },

    #[error("leading digit is {0}, so the stream is not a shifted stream")]
    NotDivisible(u64),

    #[error("no start position within the search bound reproduces the tail")]
    NotFound,

    #[error("{count} start positions reproduce the tail; supply more digits")]
    Ambiguous { count: usize },

    #[error("row cap of {cap} rows reached before the requested term")]
    CapReached { cap: u64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
