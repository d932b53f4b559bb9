use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Argument outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// Input data violates a documented precondition.
    #[error("validation error: {0}")]
    Validation(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("aliasing error: mode cutoff {modes} exceeds N/2 = {half} for a grid of {n} samples")]
    Aliasing { modes: usize, half: usize, n: usize },

    #[error(
        "resolution error: 1-|z| = {distance:.3e} is below the quadrature threshold {threshold:.1e}; \
         use the spectral series instead"
    )]
    Resolution { distance: f64, threshold: f64 },

    #[error("scaling error: max beta = {max_beta:.3} at theta = {theta:.6} exceeds {limit} (exp(beta) would overflow)")]
    Scaling { max_beta: f64, theta: f64, limit: f64 },

    #[error("continuation error: {0}")]
    Continuation(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}
