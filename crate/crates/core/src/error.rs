use thiserror::Error;

/// Errors raised by the measures, constants, and estimators in this crate.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// A parameter lies outside the window where the quantity is defined.
    /// The message names the violated constraint, e.g. "requires p < 2(alpha - n)".
    #[error("domain error: {0}")]
    Domain(String),

    /// A Cauchy measure with alpha <= n/2 has infinite mass.
    #[error("divergent measure: requires alpha > n/2 (got n = {n}, alpha = {alpha})")]
    DivergentMeasure { n: usize, alpha: f64 },

    /// The requested moment of a heavy-tailed law is infinite.
    #[error("infinite moment: requires p < {bound} (got p = {p})")]
    InfiniteMoment { p: f64, bound: f64 },

    /// A Monte Carlo estimate would have infinite variance.
    #[error("variance guard: {0}; use the exact/quadrature path instead")]
    VarianceGuard(String),

    #[error("shape mismatch: expected dimension {expected}, got {got}")]
    Shape { expected: usize, got: usize },

    #[error("configuration error: {0}")]
    Config(String),

    /// An integrand returned a non-finite value.
    #[error("poisoned sample: integrand is not finite at point {point:?}")]
    PoisonedSample { point: Vec<f64> },

    /// A grid density carries too much mass near the boundary for the
    /// truncated operator to be trusted.
    #[error("truncation warning: mass {outside:e} outside the central half of the grid exceeds {limit:e}")]
    Truncation { outside: f64, limit: f64 },

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
