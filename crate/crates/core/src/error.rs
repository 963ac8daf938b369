use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("operation needs at least {required} spins, got {got}")]
    TooFewSpins { required: usize, got: usize },

    #[error("coupling J must be nonzero to form h/J or chi = Jt")]
    ZeroCoupling,

    #[error("full-space state for N = {spins} exceeds the oracle cap of {cap} spins")]
    OracleCapExceeded { spins: usize, cap: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("state has weight {leakage:e} outside the symmetric sector")]
    SymmetryViolation { leakage: f64 },

    #[error("state has zero norm")]
    ZeroNorm,

    #[error("tridiagonal eigensolver did not converge for dimension {dim}")]
    EigenNonConvergence { dim: usize },

    #[error("theta = {theta} lies within {margin} of a pole")]
    PoleProximity { theta: f64, margin: f64 },

    #[error("finite-difference step {step:e} outside [{min:e}, {max:e}]")]
    InvalidStep { step: f64, min: f64, max: f64 },

    #[error("curvature R = {curvature} outside the invertible range: {reason} (value {value})")]
    CurvatureDomain {
        curvature: f64,
        reason: &'static str,
        value: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}
