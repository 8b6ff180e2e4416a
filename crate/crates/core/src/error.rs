use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("inexact-zero divisor")]
    InexactZeroDivisor,
    #[error("exp-divergent: valuation {0} does not exceed 1/(p-1)")]
    ExpDivergent(String),
    #[error("log-divergent: argument is not congruent to 1")]
    LogDivergent,
    #[error("unsupported prime {0}: p must be an odd prime with p^2 < 2^62")]
    InvalidPrime(u64),
    #[error("unsupported field degree {0}")]
    InvalidDegree(usize),
    #[error("incompatible parameters: {0}")]
    Incompatible(String),
    #[error("precision-exhausted: {0}")]
    PrecisionExhausted(String),
    #[error("window-collapse")]
    WindowCollapse,
    #[error("bad-substitution-target: {0}")]
    BadSubstitutionTarget(String),
    #[error("not in O_F: {0}")]
    NotIntegral(String),
    #[error("not a unit: {0}")]
    NotAUnit(String),
    #[error("formal log did not stabilize within {0} iterations")]
    NoStabilization(usize),
    #[error("character-not-L-rational: generator {0} only has a deferred value")]
    CharacterNotRational(usize),
    #[error("non-invertible matrix at window precision: {0}")]
    NonInvertible(String),
    #[error("decomposition failure: {0}")]
    Decomposition(String),
    #[error("log-gamma-nonconvergent: no m <= {0} reaches the valuation gain")]
    LogGammaNonconvergent(u32),
    #[error("internal-inconsistency: {0}")]
    InternalInconsistency(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("End-not-scalar: defect matrix for basis element {0} is not scalar")]
    EndNotScalar(usize),
    #[error("defect operator is not base-linear: {0}")]
    NotBaseLinear(String),
    #[error("cocycle consistency failure: {0}")]
    Cocycle(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
