use thiserror::Error;

/// Errors surfaced by the geometry and numerics layers.
#[derive(Debug, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Operation not defined for the given sign of the curvature.
    #[error("unsupported curvature: {0}")]
    UnsupportedCurvature(String),

    /// Integral known to diverge for the given parameters.
    #[error("divergent integral: {0}")]
    Divergent(String),

    /// Quadrature or ODE stepping failed to converge.
    #[error("numerical failure: {0}")]
    Numerics(String),

    /// Sampled field and profile grids do not line up.
    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    /// A search target lies outside the attainable range.
    #[error("no solution: {0}")]
    NoSolution(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code mandated for this error class (usage errors are
    /// handled at the CLI layer and map to 2).
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Domain(_)
            | Error::UnsupportedCurvature(_)
            | Error::Divergent(_)
            | Error::NoSolution(_) => 3,
            Error::Numerics(_) | Error::GridMismatch(_) => 3,
        }
    }
}
