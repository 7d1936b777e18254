use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not hyperbolic: {0}")]
    NotHyperbolic(String),
    #[error("determinant {0} is not +1 or -1")]
    NotUnimodular(i64),
    #[error("eigenvectors are not orthogonal (v+ . v- = {0:e})")]
    NonOrthogonalEigenbasis(f64),
    #[error("integer overflow computing S0^{0}")]
    ExponentOverflow(i64),
    #[error("invalid trigonometric polynomial: {0}")]
    InvalidTrigPoly(String),
    #[error("{what} = {value} exceeds the limit {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("invalid cut: {0}")]
    InvalidCut(String),
    #[error("series must have b0 = 1, got {0}")]
    BadNormalization(f64),
    #[error("finite-difference step t must be non-zero")]
    ZeroStep,
    #[error("|eps| = {eps} is beyond the estimated convergence radius {radius:e}")]
    RadiusExceeded { eps: f64, radius: f64 },
    #[error("Jacobian is singular at ({0}, {1})")]
    SingularJacobian(f64, f64),
    #[error("no convergence: {0}")]
    NoConvergence(String),
    #[error("V- vanishes at t = {0}")]
    ZeroDenominator(f64),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
}

impl Error {
    /// Short machine-readable name used in diagnostics.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::NotHyperbolic(_) => "NotHyperbolic",
            Error::NotUnimodular(_) => "NotUnimodular",
            Error::NonOrthogonalEigenbasis(_) => "NonOrthogonalEigenbasis",
            Error::ExponentOverflow(_) => "ExponentOverflow",
            Error::InvalidTrigPoly(_) => "InvalidTrigPoly",
            Error::TooLarge { .. } => "TooLarge",
            Error::InvalidCut(_) => "InvalidCut",
            Error::BadNormalization(_) => "BadNormalization",
            Error::ZeroStep => "ZeroStep",
            Error::RadiusExceeded { .. } => "RadiusExceeded",
            Error::SingularJacobian(..) => "SingularJacobian",
            Error::NoConvergence(_) => "NoConvergence",
            Error::ZeroDenominator(_) => "ZeroDenominator",
            Error::InvalidParameter(_) => "InvalidParameter",
        }
    }

    /// Errors that stem from bad input rather than a numerical failure.
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::NotHyperbolic(_)
                | Error::NotUnimodular(_)
                | Error::NonOrthogonalEigenbasis(_)
                | Error::InvalidTrigPoly(_)
                | Error::TooLarge { .. }
                | Error::InvalidCut(_)
                | Error::BadNormalization(_)
                | Error::ZeroStep
                | Error::InvalidParameter(_)
        )
    }
}
