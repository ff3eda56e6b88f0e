//! Crate-wide error type.

use thiserror::Error;

/// Errors surfaced by the numerical operations.
///
/// `DivergentIntegral` is a mathematical verdict (the integral genuinely
/// diverges); `NonConvergence` is a numerical failure (the refinement budget
/// ran out before the error estimate met the tolerance). Callers that sweep
/// over inputs generally want to treat the two differently.
#[derive(Debug, Error)]
pub enum LabError {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("non-convergence: {0}")]
    NonConvergence(String),

    #[error("divergent integral")]
    DivergentIntegral,

    #[error("no sign onset found for derivative order {order}")]
    NotFound { order: usize },

    #[error("gram matrix ill-conditioned (condition estimate {cond:.3e})")]
    IllConditioned { cond: f64 },

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;

impl LabError {
    /// Process exit code for the CLI: 0 pass, 1 check failure, 2 config
    /// error, 3 numeric non-convergence. Check failures are not errors
    /// (the runner reports them), so only 2 and 3 appear here.
    pub fn exit_code(&self) -> i32 {
        match self {
            LabError::NonConvergence(_) | LabError::DivergentIntegral => 3,
            _ => 2,
        }
    }
}
