use num_bigint::BigUint;
use thiserror::Error;

/// Errors raised by the word calculus, the subgroup graphs and the witness
/// pipeline.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unknown letter `{symbol}` at column {column}")]
    UnknownLetter { symbol: char, column: usize },

    #[error("syntax error at column {column}: {message}")]
    Syntax { column: usize, message: String },

    #[error("invalid group descriptor: {0}")]
    Descriptor(String),

    #[error("letter index {index} is outside the alphabet of rank {rank}")]
    DescriptorMismatch { index: usize, rank: usize },

    #[error("expansion refused: length {length} exceeds limit {limit}")]
    ExpansionLimit { length: BigUint, limit: BigUint },

    #[error("operation requires a nontrivial element")]
    TrivialElement,

    #[error("commensurator violation: {c} lies in E({g})")]
    CommensuratorViolation { g: String, c: String },

    #[error("sequence needs at least {needed} points, got {got}")]
    TooFewPoints { needed: usize, got: usize },

    #[error("every generator lies in E(g): the subgroup is elementary")]
    AllGeneratorsInCommensurator,

    #[error("invalid product form: {0}")]
    InvalidProduct(String),

    #[error("invalid certificate: {0}")]
    Certificate(String),
}

pub type Result<T> = std::result::Result<T, Error>;
