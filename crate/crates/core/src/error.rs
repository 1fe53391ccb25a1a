use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid degree {0}: must be at least 1")]
    InvalidDegree(i64),

    #[error("resource limit: {0}")]
    ResourceLimit(String),

    #[error("triangulation is not regular: {0}")]
    NonRegular(String),

    #[error("height function does not induce the triangulation: {0}")]
    InconsistentLift(String),

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("point {0} does not lie on the curve")]
    NotOnCurve(String),

    #[error("divisors live on different graphs")]
    GraphMismatch,

    #[error("invalid flow: {0}")]
    InvalidFlow(String),

    #[error("out of scope: {0}")]
    OutOfScope(String),

    #[error("not applicable: {0}")]
    NotApplicable(String),

    #[error("theorem violation: {0}")]
    TheoremViolation(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
}
