use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },
    #[error("matrix is not positive definite (smallest eigenvalue {min_eigenvalue:e})")]
    NotPositiveDefinite { min_eigenvalue: f64 },
    #[error("zero lies on the boundary of the numerical range within tolerance and no witness was recovered")]
    BoundaryAmbiguous,
    #[error("recovery failed: best residual {residual:e} exceeds tolerance {tol:e}")]
    FailedRecovery { residual: f64, tol: f64 },
    #[error("hull membership is indeterminate: margin {margin:e} is inside the tolerance band")]
    Indeterminate { margin: f64 },
    #[error("no verified excluded point found")]
    VerificationFailed,
    #[error("pencil is not dissipative: smallest Hermitian-part eigenvalue {min_eigenvalue:e}")]
    NotDissipative { min_eigenvalue: f64 },
    #[error("numerical range of the pencil is not the whole plane")]
    NotFullPlane,
    #[error("the Hermitian pair has a common isotropic vector")]
    HasIsotropicVector,
    #[error("congruence rescaling met a diagonal entry in the ambiguity band ({ratio:e})")]
    NumericallySingular { ratio: f64 },
    #[error("no definite linear combination found (best margin {margin:e})")]
    NotSeparable { margin: f64 },
    #[error("coefficient {index} is neither positive nor negative semidefinite")]
    NotSemidefinite { index: usize },
    #[error("analysis unresolved: {0}")]
    Unresolved(String),
    #[error("all quadratic forms vanish: the vector is a common isotropic vector")]
    AllFormsZero,
    #[error("statement not proven for this input: {0}")]
    Unproven(String),
}

pub type Result<T> = std::result::Result<T, Error>;
