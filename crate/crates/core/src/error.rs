use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("state vector has norm {norm:e}, cannot normalize")]
    ZeroVector { norm: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },

    #[error("empty input")]
    Empty,

    #[error("operator is not hermitian (defect {defect:e})")]
    NotHermitian { defect: f64 },

    #[error("operator is not a projector (defect {defect:e})")]
    NotProjector { defect: f64 },

    #[error("operator is not a rank-1 projector (trace {trace})")]
    NotRankOne { trace: f64 },

    #[error("post-selection impossible: |<post|pre>| = {overlap:e}")]
    OrthogonalSelection { overlap: f64 },

    #[error("weak value undefined: |<y|x>| = {overlap:e}")]
    UndefinedWeakValue { overlap: f64 },

    #[error("basis is not orthonormal and complete (defect {defect:e})")]
    IncompleteBasis { defect: f64 },

    #[error("meet did not converge after {iterations} iterations (defect {defect:e})")]
    NoConvergence { iterations: usize, defect: f64 },

    #[error("precondition failed: {0}")]
    PreconditionFailed(String),

    #[error("matrices are not proportional (residual {residual:e})")]
    NotProportional { residual: f64 },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("validation error in `{field}`: {message}")]
    Validation { field: String, message: String },

    #[error("unknown observable label `{0}`")]
    UnknownLabel(String),

    #[error("invalid pointer grid: {0}")]
    InvalidGrid(String),

    #[error("invalid coupling sweep: {0}")]
    InvalidSweep(String),

    #[error("post-selection probability {probability:e} vanished")]
    PostSelectionVanished { probability: f64 },

    #[error("extrapolation unstable: residual {residual:e} against estimate {estimate:e}")]
    FitUnstable { residual: f64, estimate: f64 },
}
