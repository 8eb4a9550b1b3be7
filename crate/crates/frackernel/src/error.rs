//! Crate-wide error type.

use crate::transform::KernelValue;

/// Errors produced by the library.
#[derive(Debug, Clone, thiserror::Error)]
pub enum Error {
    /// An argument is outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Adaptive quadrature failed to meet the requested tolerance.
    /// Carries the best estimate obtained so far.
    #[error("quadrature did not converge (best estimate {:.6e}, est. error {:.2e})", best.value, best.est_error)]
    Convergence { best: KernelValue },

    /// The requested asymptotic formula needs a finite profile moment that
    /// does not exist for this profile.
    #[error("unsupported profile: {0}")]
    UnsupportedProfile(String),

    /// Parameters fall outside the cases covered by the asymptotic theory.
    #[error("uncovered case: {0}")]
    UncoveredCase(String),

    /// The evaluation point is a genuine singularity of the kernel
    /// (coinciding points with d >= alpha under inverse subordination).
    #[error("divergent: {0}")]
    Divergent(String),

    /// A sample batch is degenerate (all values equal).
    #[error("degenerate sample: all values equal")]
    DegenerateSample,
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
