use thiserror::Error;

/// Errors raised by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    Dimension { expected: usize, found: usize },

    #[error("unsupported Hilbert-space dimension {0} (only 2 and 3 are supported)")]
    UnsupportedDimension(usize),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("invalid time grid: {0}")]
    InvalidGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("generator is not Hermitian at t = {time} (deviation {deviation:e})")]
    NonHermitian { time: f64, deviation: f64 },

    #[error("damping operator is not positive semidefinite at t = {time} (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { time: f64, min_eigenvalue: f64 },

    #[error("integration diverged at t = {time}")]
    Divergence { time: f64 },

    #[error("degenerate (zero-norm) state at t = {time}")]
    DegenerateState { time: f64 },

    #[error("epsilon = 0 gives an infinite detuning at the protocol boundaries")]
    SingularDetuning,

    #[error("degenerate protocol duration {0}")]
    DegenerateDuration(f64),

    #[error("pulse amplitude diverges at t = {time}")]
    PulseBlowup { time: f64 },

    #[error("state is off the parametrized STIRAP manifold (deviation {deviation:e})")]
    OffManifold { deviation: f64 },

    #[error("damping profile is not invertible: rate {rate:e} at s = {s}")]
    NonInvertibleProfile { s: f64, rate: f64 },

    #[error("no solution: {0}")]
    NoSolution(String),

    #[error("QSL radicand {radicand:e} is negative beyond round-off")]
    InternalInconsistency { radicand: f64 },

    #[error("grid too coarse at t = {time}: phi jumps by {jump} rad in one step")]
    Resolution { time: f64, jump: f64 },

    #[error("the state never becomes orthogonal to the initial state within the horizon")]
    NoOrthogonalState,

    #[error("invalid angular trajectory: {0}")]
    InvalidTrajectory(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
