use thiserror::Error;

use crate::arith::ArithError;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error("multivectors live over different quadratic forms")]
    FormMismatch,
    #[error("dimension {got} too small (need at least {need})")]
    DimTooSmall { got: usize, need: usize },
    #[error("dimension {0} must be even and positive")]
    BadDimension(usize),
    #[error("vector has length {got}, form has dimension {want}")]
    LengthMismatch { got: usize, want: usize },
    #[error("result of the twisted action is not a vector")]
    NotGradeOne,
    #[error("isotropic vector")]
    Isotropic,
    #[error("not in the spin group: {0}")]
    NotSpin(String),
    #[error("matrix is not in SO: {0}")]
    NotOrthogonal(String),
    #[error("product of vector norms {0} is not a rational square")]
    NonSquareNorm(String),
    #[error("odd number of vectors")]
    OddLength,
    #[error("norms differ: {0} vs {1}")]
    NormMismatch(String, String),
    #[error("bounded search failed: {0}")]
    SearchFailed(String),
    #[error("search cap {0} exceeded")]
    CapExceeded(u64),
    #[error("prime {p} is {kind} for t = {t}")]
    NotSplit {
        p: String,
        t: String,
        kind: &'static str,
    },
    #[error("not integral at {p} (torus valuation {torus_val})")]
    NonIntegral { p: String, torus_val: i64 },
    #[error("elements do not commute")]
    NotCommuting,
    #[error("{0}")]
    Precondition(String),
    #[error("verification failed: {0}")]
    Verification(String),
    #[error("{0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
