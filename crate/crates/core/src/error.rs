use thiserror::Error;

use crate::family::Family;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{family} expects {expected} parameter(s), got {got}")]
    BadParamCount {
        family: Family,
        expected: usize,
        got: usize,
    },

    #[error("parameter `{name}` must be finite and > 0, got {value}")]
    NonPositiveParam { name: &'static str, value: f64 },

    #[error("incomplete gamma shape must be > 0, got {0}")]
    NonPositiveShape(f64),

    #[error("incomplete gamma argument must be >= 0, got {0}")]
    NegativeArgument(f64),

    #[error("quadrature did not converge: estimate {value:e}, error {error:e} after {subdivisions} subdivisions")]
    NoConvergence {
        value: f64,
        error: f64,
        subdivisions: usize,
    },

    #[error("series or continued fraction failed to converge for a={a}, x={x}")]
    SeriesDivergence { a: f64, x: f64 },

    #[error("invalid sample: {0}")]
    InvalidSample(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("moment equations have no admissible solution: {0}")]
    InvalidMomentSolution(String),

    #[error("kernel was built for {kernel} but the statistic was asked for {spec}")]
    KernelMismatch { kernel: String, spec: String },

    #[error("Laplace coefficient overflows even in log space (log value {0})")]
    Overflow(f64),

    #[error("unsupported alternative: {0}")]
    UnsupportedAlt(String),

    #[error("invalid weight: {0}")]
    InvalidWeight(String),

    #[error("parameter estimation failed on the observed sample: {0}")]
    EstimationFailed(Box<Error>),

    #[error("gave up after {attempts} redraws of degenerate bootstrap samples")]
    ReplicateBudgetExhausted { attempts: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
}
