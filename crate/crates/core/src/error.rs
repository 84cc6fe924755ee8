use thiserror::Error;

/// Errors raised by the distillation toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("matrix is not square: {rows}x{cols}")]
    NonSquare { rows: usize, cols: usize },

    #[error("matrix is empty")]
    Empty,

    #[error("not Hermitian: |rho[{row}][{col}] - conj(rho[{col}][{row}])| = {deviation:e}")]
    NotHermitian { row: usize, col: usize, deviation: f64 },

    #[error("not positive semidefinite: minimum eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("trace is not one: {trace}")]
    TraceNotOne { trace: f64 },

    #[error("state vector is not normalized: squared norm {norm_sq}")]
    NotNormalized { norm_sq: f64 },

    #[error("invalid probability vector: {0}")]
    InvalidDistribution(String),

    #[error("state has no nonzero diagonal entry")]
    DegenerateState,

    #[error("target state is incoherent (coherence rank 1)")]
    IncoherentTarget,

    #[error("coherence rank {source_rank} of the source is below the target rank {target_rank}")]
    RankDeficit { source_rank: usize, target_rank: usize },

    #[error("dimension {dim} exceeds the exhaustive-search limit {limit}")]
    DimensionTooLarge { dim: usize, limit: usize },

    #[error("Kraus operators violate completeness: max eigenvalue of sum K^dag K is {max_eigenvalue}")]
    IncompletePlan { max_eigenvalue: f64 },

    #[error("Kraus operator `{id}` is not strictly incoherent: {reason}")]
    NotStrictlyIncoherent { id: String, reason: String },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("unknown strategy `{name}` (available: {available})")]
    UnknownStrategy { name: String, available: String },
}

pub type Result<T> = std::result::Result<T, Error>;
