use thiserror::Error;

/// Errors produced by the solvers, designers and file loaders.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("dimension mismatch in {what}: expected {expected}, found {found}")]
    DimensionMismatch {
        what: &'static str,
        expected: usize,
        found: usize,
    },

    #[error("invalid game: {0}")]
    InvalidGame(String),

    #[error("player index {index} out of range for {n} players")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("linear system is singular (reciprocal condition estimate {rcond:.3e})")]
    SingularSystem { rcond: f64 },

    #[error("no convergence after {iterations} iterations (natural residual {residual:.3e})")]
    MaxItersExceeded {
        iterations: usize,
        residual: f64,
        best: Vec<f64>,
    },

    #[error("step size selection failed (step shrank to {step:.3e})")]
    StepSelectionFailed { step: f64 },

    #[error("fixed-point iteration did not converge after {iterations} iterations (residual {residual:.3e})")]
    NoConvergence { iterations: usize, residual: f64 },

    #[error("demand function evaluation failed for player {player}: {message}")]
    Gamma { player: usize, message: String },

    #[error("operation requires an affine demand family")]
    AffineGammaRequired,

    #[error("infeasible design: {0}")]
    InfeasibleDesign(String),

    #[error("invalid design problem: {0}")]
    InvalidProblem(String),

    #[error("no design solution found (best residual {best_residual:.3e}, {rejected_negative} rejected for negative actions)")]
    NoSolutionFound {
        best_residual: f64,
        rejected_negative: usize,
    },

    #[error("matrix of order {n} exceeds the limit of {max} for principal-minor enumeration")]
    TooLarge { n: usize, max: usize },

    #[error("matrix is not symmetric (max asymmetry {asymmetry:.3e})")]
    NotSymmetric { asymmetry: f64 },

    #[error("profile is not an equilibrium (residual {residual:.3e})")]
    NotAnEquilibrium { residual: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("{location}: {message}")]
    Format { location: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
