use crate::specfun::SpecFunError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    SpecFun(#[from] SpecFunError),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("matrix is singular to working precision ({0})")]
    Singular(String),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("search exhausted: {message}")]
    SearchExhausted { message: String, trace: Vec<(f64, f64)> },
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },
    #[error("solver failure: {0}")]
    Solver(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
