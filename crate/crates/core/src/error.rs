use thiserror::Error;

/// Errors reported by grid construction, interpolation, tracing and error measurement.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("grid needs at least 4 nodes, got {0}")]
    TooFewNodes(usize),
    #[error("grid nodes must satisfy 0 = x_0 < x_1 < ... < x_(M-1) < 1: {0}")]
    InvalidNodes(String),
    #[error("non-finite input {0}")]
    NonFinite(f64),
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("operation requires a uniform grid")]
    NonUniformGrid,
    #[error("CFL number {0} outside [0, 1]")]
    Cfl(f64),
    #[error("wavenumber {k} outside 1..={nyquist}")]
    Wavenumber { k: i64, nyquist: usize },
    #[error("sample count {0} is odd or zero")]
    OddSampleCount(usize),
    #[error("reference norm is zero")]
    ZeroReference,
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("reference tracer did not reach tolerance {tol:e} within {steps} steps")]
    NoConvergence { tol: f64, steps: usize },
    #[error("singular linear system")]
    Singular,
    #[error("scheme {scheme} cannot advance this state: {reason}")]
    Scheme { scheme: &'static str, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
