//! Error taxonomy shared by every fallible operation in the crate.
//!
//! Estimators and samplers return structured errors rather than NaN: a
//! successful result never contains a non-finite number, and every
//! precondition violation maps to a named variant carrying the offending
//! values.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("parameter `{name}` must be positive, got {value}")]
    NonPositiveParameter { name: &'static str, value: f64 },

    #[error("elasticity k = {k} lies outside the admissible range [1/2, 1)")]
    ElasticityOutOfRange { k: f64 },

    #[error("k = 1/2 requires 2a >= sigma^2, got 2a = {two_a} and sigma^2 = {sigma_sq}")]
    FellerViolation { two_a: f64, sigma_sq: f64 },

    #[error("{op}: input {value} is outside the operation's domain")]
    DomainError { op: &'static str, value: f64 },

    #[error("path value at index {index} is not strictly positive")]
    NonPositivePath { index: usize },

    #[error("moment of order {q} does not exist (requires q > -{kappa})")]
    MomentDoesNotExist { q: f64, kappa: f64 },

    #[error("quadrature failed to reach tolerance {tol} (last error estimate {err})")]
    QuadratureFailure { tol: f64, err: f64 },

    #[error("sampling grid is degenerate: horizon {horizon}, omega {omega} yield no steps")]
    DegenerateGrid { horizon: f64, omega: f64 },

    #[error("non-finite sample produced at step {step}")]
    NonFiniteSample { step: usize },

    #[error("stride {stride} does not evenly divide {n} steps")]
    StrideMismatch { n: usize, stride: usize },

    #[error("sample is degenerate: the level variance is not positive")]
    DegenerateSample,

    #[error("need at least {min} points, got {n}")]
    TooFewPoints { n: usize, min: usize },

    #[error("level {level} at index {index} is within {epsilon} of 1, log-level too small")]
    NearUnityLevel { index: usize, level: f64, epsilon: f64 },

    #[error("levels at indices {i} and {j} have |log ratio| below {epsilon}")]
    NearUnityRatio { i: usize, j: usize, epsilon: f64 },

    #[error("squared increment at index {index} is not positive")]
    NonPositiveIncrement { index: usize },

    #[error("no admissible points survive the exclusion rule ({excluded} excluded)")]
    NoAdmissiblePoints { excluded: usize },

    #[error("autoregressive coefficient {phi} is outside (0, 1); data inconsistent with mean reversion")]
    PhiOutOfRange { phi: f64 },

    #[error("need at least {min} samples, got {n}")]
    TooFewSamples { n: usize, min: usize },

    #[error("regression design is degenerate: fewer than two distinct abscissae")]
    DegenerateDesign,

    #[error("invalid configuration: {reason}")]
    ConfigError { reason: String },

    #[error("{failed} of {total} replications failed, exceeding the budget fraction {budget}")]
    FailureBudgetExceeded { failed: usize, total: usize, budget: f64 },
}
