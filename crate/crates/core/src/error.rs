use thiserror::Error;

use crate::params::Case;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("syntax error at byte {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("negative a-exponent at byte {pos}")]
    NegativeAExponent { pos: usize },
    #[error("element is not in the positive monoid")]
    NotInMonoid,
    #[error("parameter mismatch between operands")]
    ParamsMismatch,
    #[error("{op} is not available in case {case}")]
    WrongCase { op: &'static str, case: Case },
    #[error("query needs depth {needed} but only {available} entries are stored")]
    DepthExceeded { needed: usize, available: usize },
    #[error("invalid sequence: {0}")]
    InvalidSequence(String),
    #[error("invalid descriptor: {0}")]
    InvalidDescriptor(String),
    #[error("d divides c: no separating extension exists for some pairs")]
    Periodic,
    #[error("the two elements are equal")]
    EqualElements,
    #[error("triples are not composable: {0}")]
    NotComposable(String),
    #[error("cylinder function has level zero")]
    LevelZero,
}

pub type Result<T> = std::result::Result<T, Error>;
