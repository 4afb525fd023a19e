use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid ring: {0}")]
    InvalidRing(String),
    #[error("dimension mismatch: {0}")]
    Dimension(String),
    #[error("parameter error: {0}")]
    Parameter(String),
    #[error("{0} is not a unit")]
    NotAUnit(String),
    #[error("valuation of zero is undefined")]
    UndefinedValuation,
    #[error("generators do not commute: {0}")]
    CommutativityViolation(String),
    #[error("hypotheses not satisfied: {0}")]
    HypothesesNotSatisfied(String),
    #[error("resource bound exceeded: k(l+1) = {needed} > {bound}")]
    ResourceBound { needed: u64, bound: u64 },
    #[error("internal consistency failure: {0}")]
    Consistency(String),
    #[error("p-adic precision exhausted: {0}")]
    Precision(String),
    #[error("malformed matrix dump: {0}")]
    Dump(String),
}

pub type Result<T> = std::result::Result<T, Error>;
