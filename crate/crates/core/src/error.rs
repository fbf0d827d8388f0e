use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("type {label}{rank} is not supported: type {label} requires rank at least {min}")]
    UnsupportedRank { label: char, rank: usize, min: usize },
    #[error("unknown type label '{0}' (expected one of A, B, C, D)")]
    UnknownType(String),
    #[error("modulus {0} is not an odd prime")]
    BadModulus(u64),
    #[error("row index {index} out of range 1..={rank}")]
    RowOutOfRange { index: usize, rank: usize },
    #[error("root is not a positive root of this system")]
    NotARoot,
    #[error("{0}")]
    NotApplicable(String),
    #[error("matrix mismatch: {0}")]
    Mismatch(String),
    #[error("element is not in the unipotent subgroup: {0}")]
    NotInGroup(String),
    #[error("inconsistent structure constant solve for roots {alpha:?}, {beta:?}: {detail}")]
    InconsistentConstants { alpha: Vec<u32>, beta: Vec<u32>, detail: String },
    #[error("argument out of range: {0}")]
    OutOfRange(String),
    #[error("state space too large: |U| = {order} exceeds cap {cap}")]
    Infeasible { order: u128, cap: u128 },
    #[error("graph has {0} vertices; at most 64 are supported")]
    GraphTooLarge(usize),
    #[error("power series inverse needs constant term 1")]
    ZeroConstantTerm,
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
