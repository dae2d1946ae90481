use alloc::string::String;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("instance rejected: {0}")]
    RejectsInstance(String),
    #[error("closed-form hypothesis violated: {0}")]
    HypothesisViolated(String),
    #[error("cut is not a member of the coefficient polyhedron (violated at k = {k})")]
    NotGMember { k: usize },
    #[error("cut with y-coefficient {0} rejected: a valid cut has a nonnegative y-coefficient, and zero means the cut belongs to the knapsack polytope")]
    NonPositiveGamma(String),
    #[error("bad index chain T: {0}")]
    BadT(String),
    #[error("p - s_{m} = {value} is not an integer")]
    NotIntegral { m: usize, value: String },
    #[error("facet spec violation: {0}")]
    SpecViolation(String),
    #[error("structured separation hypothesis failed: {0}")]
    ConfigViolation(String),
    #[error("sign pattern violation: {0}")]
    PatternViolation(String),
    #[error("instance too large for enumeration: n = {n} exceeds cap {cap}")]
    InstanceTooLarge { n: usize, cap: usize },
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid query: {0}")]
    BadQuery(String),
}

pub type Result<T> = core::result::Result<T, Error>;
