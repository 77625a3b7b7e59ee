use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds {tol:.3e}")]
    NonHermitian { defect: f64, tol: f64 },
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eig:.3e}")]
    NotPositive { min_eig: f64 },
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("bracket is not constant in x at rho = {rho}: relative spread {spread:.3e}")]
    IntegrationAccuracy { rho: Complex64, spread: f64 },
    #[error("coefficient matrix is singular at rho = {rho}")]
    Singular { rho: Complex64 },
    #[error("bound state near tau = {tau} is not resolved by the scan; refine tau_max or the scan step")]
    BoundStateResolution { tau: f64 },
    #[error("contour geometry: {0}")]
    ContourGeometry(String),
    #[error("no well-conditioned evaluation point for the weight at tau = {tau}")]
    DegenerateEvaluation { tau: f64 },
    #[error("Nystrom system is ill-posed at x = {x}: condition estimate {cond:.3e}")]
    IllPosed { x: f64, cond: f64 },
    #[error("left and right reconstructions disagree by {defect:.3e} (tolerance {tol:.3e})")]
    Inconsistent { defect: f64, tol: f64 },
    #[error("D(rho) is singular at rho = {rho}")]
    InvalidD { rho: Complex64 },
    #[error("|S(rho)| >= 1 at rho = {rho}; log(1 - |S|^2) is undefined")]
    LogSingularity { rho: f64 },
    #[error("bound states {a} and {b} are not distinct")]
    Distinctness { a: f64, b: f64 },
    #[error("stencil needs at least {needed} samples, got {got}")]
    Arity { needed: usize, got: usize },
    #[error("Fourier kernel is not resolved: {0}")]
    GridResolution(String),
    #[error("left scattering data cannot be derived: {0}")]
    Underdetermined(String),
}

impl Error {
    /// Errors caused by inputs that violate a documented precondition, as opposed
    /// to numerical breakdown during a computation.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NonHermitian { .. }
                | Error::NotPositive { .. }
                | Error::InvalidGrid(_)
                | Error::InvalidInput(_)
                | Error::DimensionMismatch { .. }
                | Error::ContourGeometry(_)
                | Error::Inconsistent { .. }
                | Error::LogSingularity { .. }
                | Error::Distinctness { .. }
                | Error::Arity { .. }
                | Error::Underdetermined(_)
        )
    }
}
