use alloc::string::String;

/// Failure modes shared by every module.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("step size underflow at t = {t}")]
    StepUnderflow { t: f64 },
    #[error("non-finite state at t = {t}")]
    NonFinite { t: f64 },
    #[error("step limit exceeded at t = {t}")]
    StepLimit { t: f64 },
    #[error("singular matrix")]
    SingularMatrix,
    #[error("no convergence after {iterations} iterations (residual {residual:e})")]
    NoConvergence { iterations: usize, residual: f64 },
    #[error("diverging iterate rejected (residual {residual:e})")]
    Divergence { residual: f64 },
    #[error("quadrature needs at least two nodes")]
    TooFewNodes,
    #[error("value outside interpolation range: t = {t}")]
    OutOfRange { t: f64 },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("constraint drift {drift:e} at t = {t}")]
    ConstraintDrift { t: f64, drift: f64 },
    #[error("ambiguous classification: {0}")]
    Ambiguous(String),
    #[error("quadrature estimates disagree by {difference:e}")]
    QuadratureDisagreement { difference: f64 },
}

pub type Result<T> = core::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
