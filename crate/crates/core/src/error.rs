use thiserror::Error;

/// Errors raised by the simulation and criteria layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hermitian (deviation {deviation:.3e} > {tolerance:.1e})")]
    NotHermitian { deviation: f64, tolerance: f64 },
    #[error("matrix is not symmetric (deviation {deviation:.3e})")]
    NotSymmetric { deviation: f64 },
    #[error("trace {trace} differs from 1 by more than {tolerance:.1e}")]
    NotNormalized { trace: f64, tolerance: f64 },
    #[error("operator has eigenvalue {min_eigenvalue:.3e} below -{tolerance:.1e}")]
    NotPositive { min_eigenvalue: f64, tolerance: f64 },
    #[error("imaginary residue {residue:.3e} exceeds tolerance {tolerance:.1e}")]
    TolExceeded { residue: f64, tolerance: f64 },
    #[error("truncated Fock space loses probability mass {lost:.3e} (tolerance {tolerance:.1e})")]
    CutoffExceeded { lost: f64, tolerance: f64 },
    #[error("cutoff {cutoff} too small: neglected tail mass {tail:.3e} > {tolerance:.1e}")]
    CutoffTooSmall { cutoff: usize, tail: f64, tolerance: f64 },
    #[error("bad moment order: {0}")]
    BadOrder(String),
    #[error("parameter out of domain: {0}")]
    DomainError(String),
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;
