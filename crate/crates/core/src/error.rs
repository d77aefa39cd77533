use thiserror::Error;

/// Errors raised by the numerical core.
///
/// Values are carried as `f64` regardless of the working scalar so that
/// error reports have a single concrete shape.
#[derive(Debug, Clone, Error, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("feedback strength lambda > 0 requires a measurement strength nu > 0")]
    FeedbackWithoutMeasurement,

    #[error("linear system is singular (pivot {pivot:e} in block of size {block})")]
    Singular { pivot: f64, block: usize },

    #[error("steady state is not unique: a {block}-dimensional block has a nontrivial null space")]
    NonUniqueSteadyState { block: usize },

    #[error("linear solve did not converge (residual {residual:e})")]
    SolveFailed { residual: f64 },

    #[error("truncation too small: top-level population {tail:e} exceeds {threshold:e}")]
    TruncationTail { tail: f64, threshold: f64 },

    #[error("truncation leak {leak:e} exceeds tolerance {tolerance:e} at t = {time}")]
    TruncationLeak { leak: f64, tolerance: f64, time: f64 },

    #[error("not a valid density operator: {0}")]
    InvalidState(String),

    #[error("vacuum state: mean occupation is zero")]
    VacuumState,

    #[error("coherence time is not positive (tau = {tau:e}); wrong rotating frame or non-decaying coherence")]
    NonPositiveCoherenceTime { tau: f64 },

    #[error("step size collapsed to {step:e} at t = {time}")]
    StepSizeCollapse { step: f64, time: f64 },

    #[error("coherence function has not decayed: |g1| = {last:e} at the end of the grid (needs < {threshold:e})")]
    InsufficientDecay { last: f64, threshold: f64 },

    #[error("time grid must start at 0 and be strictly increasing")]
    InvalidTimeGrid,

    #[error("phase variance does not grow; the coherence integral diverges")]
    NonDivergentVariance,

    #[error("self-energy not dominant: optimal feedback requires 2*sqrt(eta)*chi > 1 (got {value})")]
    SelfEnergyNotDominant { value: f64 },

    #[error("quadrature did not converge (error estimate {estimate:e})")]
    QuadratureFailed { estimate: f64 },
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
