use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid size: {0}")]
    InvalidSize(String),

    #[error("size mismatch: expected {expected}, got {actual}")]
    SizeMismatch { expected: usize, actual: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("degenerate chain: stationary probability is 0/0 (p0 = 0 and p1 = 1)")]
    DegenerateChain,

    #[error("infeasible composite SBM parameters at block pair {pair}: {reason}")]
    InfeasibleBlock { pair: String, reason: String },

    #[error("infeasible persistence at chain position {position}: d = {requested} exceeds the maximal feasible {max_feasible}")]
    InfeasiblePersistence {
        position: usize,
        requested: f64,
        max_feasible: f64,
    },

    #[error("degenerate marginal at chain position {position}: previous marginal equals 1")]
    DegenerateMarginal { position: usize },

    #[error("infeasible inhomogeneous schedule at index {index}: q0 = {q0}")]
    InfeasibleSchedule { index: usize, q0: f64 },

    #[error("undefined block mean for diagonal block {0}: group has fewer than two members")]
    UndefinedBlock(usize),

    #[error("instance too large for exhaustive search ({0}); use the heuristic solver")]
    TooLarge(String),

    #[error("matrix is not symmetric (max asymmetry {0:e})")]
    NotSymmetric(f64),

    #[error("eigensolver did not converge")]
    NoConvergence,

    #[error("all-zero matrix has no Laplacian")]
    EmptyLaplacian,

    #[error("insufficient support for regression: {0} usable bins (need 3)")]
    InsufficientSupport(usize),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("i/o error: {0}")]
    Io(String),

    #[error("json error: {0}")]
    Json(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
