//! Crate-wide error type.

/// Errors surfaced by the toolkit.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    #[error("{context}: dimension mismatch (expected {expected}, got {actual})")]
    DimensionMismatch {
        context: &'static str,
        expected: usize,
        actual: usize,
    },

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("covariance violates the uncertainty relation: min eig(sigma + i Omega) = {min_eig:.3e}")]
    UncertaintyViolated { min_eig: f64 },

    #[error("integrator step size underflow at t = {t:.6e} ({detail})")]
    StepSizeUnderflow { t: f64, detail: &'static str },

    #[error("quadrature did not converge on [{a:.6e}, {b:.6e}]: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNonConvergence {
        a: f64,
        b: f64,
        estimate: f64,
        tolerance: f64,
    },

    #[error("Bogoliubov normalization defect {defect:.3e} exceeds tolerance {tolerance:.3e} (integration failure)")]
    NormalizationViolated { defect: f64, tolerance: f64 },

    #[error("alpha matrix is numerically singular")]
    SingularAlpha,

    #[error("detector at x = {x:.6e} is outside the cavity [0, {length:.6e}] at t = {t:.6e}")]
    DetectorOutsideCavity { x: f64, length: f64, t: f64 },

    #[error("special function evaluation failed: {0}")]
    SpecialFunction(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn invalid(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            name,
            reason: reason.into(),
        }
    }
}
