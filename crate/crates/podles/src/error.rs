use num_complex::Complex64;
use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Error type shared by every module of the crate.
#[derive(Debug, Clone, Error)]
pub enum Error {
    /// A constructor precondition failed (q out of range, bad tolerance, ...).
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// An operation was called outside its mathematical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Gamma (or polygamma) evaluated at a non-positive integer.
    #[error("pole of Gamma at z = {0}")]
    GammaPole(i64),

    /// Evaluation requested too close to a pole of the continued zeta function.
    #[error("point within {distance:.3e} of the lattice pole {nearest}")]
    PoleProximity { nearest: Complex64, distance: f64 },

    /// A numerical procedure failed to meet its accuracy contract.
    #[error("numeric error: {0}")]
    Numeric(String),

    /// A series did not converge within the configured term cap.
    #[error("term cap {cap} exceeded in {context}")]
    MaxTermsExceeded { context: String, cap: usize },

    /// The matrix truncation is too small for the requested evaluation.
    #[error("truncation L = {l_cap} inadequate for t = {t:.3e}; increase L to at least {suggested}")]
    TruncationInadequate { l_cap: usize, t: f64, suggested: usize },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn numeric(msg: impl Into<String>) -> Self {
        Error::Numeric(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
