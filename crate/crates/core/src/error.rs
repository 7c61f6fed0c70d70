use std::fmt;

/// Errors reported by instance generation, graph construction and the
/// simulation drivers.
#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// Dimensions of the inputs do not conform (or violate a precondition
    /// such as `k <= m < n`).
    InvalidDimension(String),
    /// A parameter is out of its admissible range.
    InvalidParam(String),
    /// The requested graph cannot exist (e.g. odd degree sum).
    Infeasible(String),
    /// Randomized construction failed within the retry budget.
    GenerationFailed(String),
    /// A dense linear system could not be solved.
    Singular(String),
    /// The gradient step size violates the contraction bound.
    StepSizeTooLarge { tau: f64, bound: f64 },
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidDimension(msg) => write!(f, "invalid dimension: {msg}"),
            Error::InvalidParam(msg) => write!(f, "invalid parameter: {msg}"),
            Error::Infeasible(msg) => write!(f, "infeasible: {msg}"),
            Error::GenerationFailed(msg) => write!(f, "generation failed: {msg}"),
            Error::Singular(msg) => write!(f, "singular system: {msg}"),
            Error::StepSizeTooLarge { tau, bound } => {
                write!(f, "step size tau = {tau} must be below {bound}")
            }
        }
    }
}

impl std::error::Error for Error {}

pub type Result<T> = std::result::Result<T, Error>;
