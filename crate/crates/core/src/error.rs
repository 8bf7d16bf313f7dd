use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LoopError {
    #[error("element {elem} out of range for a loop of order {n}")]
    OutOfRange { elem: usize, n: usize },

    #[error("order {0} is not supported (expected 1..=255)")]
    UnsupportedOrder(usize),

    #[error("table has {got} cells, expected {expected}")]
    BadShape { expected: usize, got: usize },

    #[error("not a Latin square: symbol {symbol} repeats in {line}")]
    NotLatin { symbol: usize, line: String },

    #[error("no two-sided identity element")]
    NoIdentity,

    #[error("element {0} is not power-associative; canonical powers are ambiguous")]
    NotPowerAssociative(usize),

    #[error("loop is not power-associative")]
    LoopNotPowerAssociative,

    #[error("subloop is not normal")]
    NotNormal,

    #[error("group closure exceeded cap {cap} (partial count {partial})")]
    CapExceeded { cap: usize, partial: usize },

    #[error("cocycle violates f(0,a) = f(a,0) = 0 at a = {0:?}")]
    NotNormalized(Vec<i64>),

    #[error("parameter out of range: {0}")]
    BadParameter(String),

    #[error("equation equivalence failed for element {elem}: {left} != {right} (witness {witness:?})")]
    Inconsistent {
        elem: usize,
        left: &'static str,
        right: &'static str,
        witness: Vec<usize>,
    },

    #[error("search stopped before completion ({0})")]
    SearchIncomplete(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}

pub type Result<T> = std::result::Result<T, LoopError>;
