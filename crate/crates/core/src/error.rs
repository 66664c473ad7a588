use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("vertex at level {level} has no successors inside a truncation of depth {depth}")]
    DepthExceeded { level: usize, depth: usize },

    #[error("period must be at least 2, got {0}")]
    InvalidPeriod(usize),

    #[error("branch index {index} outside 1..={k}")]
    BranchOutOfRange { index: usize, k: usize },

    #[error("cannot parse tree coordinate {0:?}")]
    InvalidCoord(String),

    #[error("spin value {0} outside 1..=3")]
    InvalidSpin(u8),

    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("configuration has no spin at vertex {0}")]
    MissingSpin(String),

    #[error("boundary field missing at vertex {0}")]
    MissingField(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("expected {expected} child spins, got {got}")]
    Arity { expected: usize, got: usize },

    #[error("level sequence of length {len} does not determine {levels} levels")]
    Underspecified { len: usize, levels: usize },

    #[error("region {0} has no uncountable ground-state family")]
    UnsupportedRegion(String),

    #[error("state space too large: {0}")]
    Capacity(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("polynomial division leaves remainder of relative size {0:e}")]
    NotDivisible(f64),

    #[error("internal consistency check failed: {0}")]
    Internal(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
