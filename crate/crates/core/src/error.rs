use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("singular parameterization: theta1 = {theta1} makes the diamond denominator vanish for this target")]
    SingularParameterization { theta1: f64 },

    #[error("no branch reproduces the target (best residual {best_residual:e})")]
    Branch { best_residual: f64 },

    #[error("no solution found after {starts} starts (best residual {best_residual:e})")]
    NoSolution { starts: usize, best_residual: f64 },

    #[error("constraint singularity: sin(theta1) = 0 leaves the N-type rate relation undefined")]
    ConstraintSingularity,

    #[error("invalid hamiltonian at t = {t}: hermiticity residual {residual:e}")]
    InvalidHamiltonian { t: f64, residual: f64 },

    #[error("accuracy failure: norm drift {drift:e} exceeds {limit:e}; increase the step count")]
    Accuracy { drift: f64, limit: f64 },

    #[error("propagation cancelled at t = {t}")]
    Cancelled { t: f64 },

    #[error("verification failed: {0}")]
    CheckFailed(String),

    #[error("four-photon resonance violated: residual {residual:e}")]
    ResonanceViolation { residual: f64 },

    #[error("unsupported configuration: {0}")]
    UnsupportedConfiguration(String),

    #[error("scenario: {0}")]
    Scenario(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

impl Error {
    /// Process exit status: 1 for invalid input, 2 for solver failures and
    /// 3 for numerical accuracy failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::SingularParameterization { .. }
            | Error::Branch { .. }
            | Error::NoSolution { .. }
            | Error::ConstraintSingularity => 2,
            Error::InvalidHamiltonian { .. }
            | Error::Accuracy { .. }
            | Error::Cancelled { .. }
            | Error::CheckFailed(_) => 3,
            Error::InvalidArgument(_)
            | Error::ResonanceViolation { .. }
            | Error::UnsupportedConfiguration(_)
            | Error::Scenario(_)
            | Error::Io(_)
            | Error::Json(_) => 1,
        }
    }
}
