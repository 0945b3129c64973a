use thiserror::Error;

/// Errors raised by the numerical kernels.
///
/// Non-convergence is not an error: it is reported through the `converged`
/// flag of the returned result so that partial traces survive.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("{what} must satisfy {constraint}, got {value}")]
    Domain {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("integrand returned a non-finite value at x = {abscissa:e}")]
    NonFinite { abscissa: f64 },

    #[error("decay exponent {decay_hint} is not integrable at infinity (need < -1)")]
    NotIntegrable { decay_hint: f64 },

    #[error("invalid quadrature configuration: {0}")]
    Config(String),

    #[error("oscillatory amplitude is not tamed by the phase substitution: {0}")]
    UntamedAmplitude(String),

    #[error(
        "point ({x}, {y}) lies within {distance:e} of the sheet (nearest arc parameter s = {arc})"
    )]
    NearSheet {
        x: f64,
        y: f64,
        distance: f64,
        arc: f64,
    },

    #[error("point ({x}, {y}) lies on the half-line support; use the one-sided traces")]
    OnSupport { x: f64, y: f64 },

    #[error("{0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(what: &'static str, constraint: &'static str, value: f64) -> Error {
    Error::Domain {
        what,
        constraint,
        value,
    }
}
