use thiserror::Error;

/// Errors shared by every module of the crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix entries must be finite (found NaN or infinity)")]
    NonFinite,
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is not square ({rows}x{cols})")]
    NonSquare { rows: usize, cols: usize },
    #[error("matrix is not symmetric (max asymmetry {residual:.3e})")]
    NonSymmetric { residual: f64 },
    #[error("matrix is not Hermitian (max asymmetry {residual:.3e})")]
    NonHermitian { residual: f64 },
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NonConvergent { sweeps: usize },
    #[error("matrix is not positive-definite (min eigenvalue {min_eigenvalue:.6e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("dimension {0} is odd; phase-space matrices must be 2n x 2n")]
    OddDimension(usize),
    #[error("matrix is not symplectic (residual {residual:.3e})")]
    NotSymplectic { residual: f64 },
    #[error("Hessian is singular (min |eigenvalue| {min_abs_eigenvalue:.6e}); use evolve_generic")]
    SingularHessian { min_abs_eigenvalue: f64 },
    #[error("linear system is singular")]
    SingularSystem,
    #[error("fixed-point search did not converge after {steps} steps (residual {residual:.3e})")]
    NoConvergence { steps: usize, residual: f64 },
    #[error("fixed-point search hit a singular Jacobian")]
    SingularJacobian,
    #[error("covariance matrix is singular; the symplectic route is unavailable")]
    SingularCovariance,
    #[error("internal verification failed: {0}")]
    VerificationFailed(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

pub type Result<T> = std::result::Result<T, Error>;
