use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix has {got} entries, expected {expected} for a square grid")]
    NotSquare { expected: usize, got: usize },

    #[error("matrix dimension must be positive")]
    EmptyMatrix,

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("matrix is not Hermitian: ||M - M*||_F = {defect:e} exceeds {tolerance:e}")]
    NotHermitian { defect: f64, tolerance: f64 },

    #[error("eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {residual:e})")]
    NonConvergence { sweeps: usize, residual: f64 },

    #[error("quadrature did not converge: {panels} panels, estimated error {est_error:e} > tol {tol:e}")]
    QuadratureNonConvergence {
        panels: usize,
        est_error: f64,
        tol: f64,
    },

    #[error("domain violation: {function} is not defined at {point} (domain {domain})")]
    Domain {
        function: String,
        point: f64,
        domain: String,
    },

    #[error("matrix is not positive definite: smallest eigenvalue {lambda_min:e} <= floor {floor:e}")]
    NotPositiveDefinite { lambda_min: f64, floor: f64 },

    #[error("invalid parameter {name}: {reason}")]
    InvalidParameter { name: String, reason: String },

    #[error("unknown function id {0:?}")]
    UnknownFunction(String),

    #[error("invalid norm kind {0:?}")]
    InvalidNorm(String),

    #[error("check {check} not applicable: {reason}")]
    NotApplicable { check: String, reason: String },

    #[error("malformed matrix file: {0}")]
    Format(String),
}

impl Error {
    pub(crate) fn param(name: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name: name.into(),
            reason: reason.into(),
        }
    }

    pub(crate) fn not_applicable(check: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::NotApplicable {
            check: check.into(),
            reason: reason.into(),
        }
    }

    /// Domain-type failures: the input lies outside where the function is defined.
    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain { .. } | Error::NotPositiveDefinite { .. })
    }

    /// Numerical failures: iteration caps reached.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NonConvergence { .. } | Error::QuadratureNonConvergence { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
