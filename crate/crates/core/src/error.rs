use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("length mismatch for {what}: expected {expected}, found {found}")]
    LengthMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("metric is not symmetric positive definite: {0}")]
    InvalidMetric(&'static str),

    #[error("vectors are rank deficient: pivot {index} has norm {pivot_norm:e}")]
    RankDeficient { index: usize, pivot_norm: f64 },

    #[error("invalid singular value spectrum: {0}")]
    InvalidSpectrum(&'static str),

    #[error("invalid distance profile: {0}")]
    InvalidDistances(&'static str),

    #[error("invalid widths: {0}")]
    InfeasibleWidths(&'static str),

    #[error("rotation matrix is not orthogonal (deviation {deviation:e})")]
    InvalidRotation { deviation: f64 },

    #[error("ambient dimension too small: {0}")]
    DimensionTooSmall(&'static str),

    #[error("no flat orthogonal matrix available for n = {0}")]
    HadamardUnavailable(usize),

    #[error("Petrov-Galerkin system is singular (sigma_n = {sigma_n:e}, sigma_1 = {sigma_1:e})")]
    SingularSystem { sigma_1: f64, sigma_n: f64 },

    #[error("Gram matrix is singular, Babuska bound undefined (sigma_n = {sigma_n:e})")]
    SingularGram { sigma_n: f64 },

    #[error(
        "solver did not converge after {iterations} iterations (kkt residual {kkt_residual:e})"
    )]
    NotConverged {
        iterations: usize,
        kkt_residual: f64,
    },

    #[error("ground truth is unavailable for a functional-mode problem")]
    TruthUnavailable,

    #[error("invalid input: {0}")]
    InvalidInput(&'static str),

    #[error("oracle limited to n <= {max}, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("invalid internal state: {0}")]
    InvalidState(&'static str),
}

pub type Result<T> = core::result::Result<T, Error>;
