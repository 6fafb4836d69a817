use thiserror::Error;

use crate::lang::ParseError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("universe mismatch: {0}")]
    UniverseMismatch(String),

    #[error("invalid universe: {0}")]
    InvalidUniverse(String),

    #[error("state `{0}` is not in the universe")]
    UnknownState(String),

    #[error("universe too large for extensional check: {needed} evaluations exceed budget {budget}")]
    BudgetExceeded { needed: u128, budget: u64 },

    #[error("iteration requires a homogeneous transformer")]
    NotHomogeneous,

    #[error("transformer is not monotone")]
    NotMonotone,

    #[error("unknown instruction `{0}`")]
    UnknownInstruction(String),

    #[error("unknown test `{0}`")]
    UnknownTest(String),

    #[error("test `{0}` has no registered negation")]
    NoNegation(String),

    #[error(transparent)]
    Parse(#[from] ParseError),

    #[error("domain {domain}: no transfer function for `{atom}`")]
    MissingTransfer { domain: String, atom: String },

    #[error("domain {domain}: widening did not stabilise within {cap} iterations")]
    WideningDivergence { domain: String, cap: usize },

    #[error("domain {0} has no enumerable carrier")]
    CarrierNotEnumerable(String),

    #[error("invalid abstract value `{text}`: {reason}")]
    InvalidValue { text: String, reason: String },

    #[error("{0}")]
    InvalidArgument(String),
}
