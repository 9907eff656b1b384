use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix contains non-finite entries")]
    NonFinite,
    #[error("matrix is singular (pivot {pivot} below threshold)")]
    SingularMatrix { pivot: usize },
    #[error("eigenvalue iteration did not converge after {iterations} iterations")]
    NoConvergence { iterations: usize },
    #[error("matrix exponential overflowed")]
    Overflow,
    #[error("time grids differ")]
    GridMismatch,
    #[error("invalid size: {0}")]
    InvalidSize(String),
    #[error("network graph is disconnected")]
    DisconnectedGraph,
    #[error("trace operator L is rank deficient (rank {rank} < {rows})")]
    RankDeficientL { rank: usize, rows: usize },
    #[error("lambda = {re}{im:+}i lies in the spectrum (distance {distance:.3e})")]
    LambdaInSpectrum { re: f64, im: f64, distance: f64 },
    #[error("operation requires case {expected}, problem has {found}")]
    WrongCase { expected: &'static str, found: &'static str },
    #[error("growth bound validation failed: finer grid raised the envelope by {ratio:.4}")]
    NonConvergedValidation { ratio: f64 },
    #[error("state does not match the reduced system layout: {0}")]
    BlockMapMismatch(String),
    #[error("unknown block cut '{0}'")]
    UnknownCut(String),
    #[error("exponential bounds are missing or invalid")]
    BoundsMissing,
    #[error("premise violated: {0}")]
    PremiseViolated(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}
