use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("truncation orders differ: {left} vs {right}")]
    OrderMismatch { left: usize, right: usize },

    #[error("x = {x} is outside the evaluation domain (requires x >= {min})")]
    Domain { x: f64, min: f64 },

    #[error("argument of H for Q_{index} has non-zero constant term {constant}; result would carry a ln term")]
    Inconsistent { index: usize, constant: String },

    #[error("index out of range: {0}")]
    IndexRange(String),

    #[error("invalid parameters: lambda + a = {0} must be positive")]
    InvalidParams(f64),

    #[error("convolution power {n} exceeds configured max depth {max}")]
    DepthExceeded { n: usize, max: usize },

    #[error(
        "quadrature on [{a}, {b}] did not converge: estimate {value:e}, error {error:e} > tolerance {tol:e} after {evals} evaluations"
    )]
    Quadrature {
        a: f64,
        b: f64,
        value: f64,
        error: f64,
        tol: f64,
        evals: usize,
    },

    #[error("cumulative grid not converged at {panels} panels: last change {change:e} > tolerance {tol:e}")]
    GridTooCoarse { panels: usize, change: f64, tol: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("b-file line {line}: {msg}")]
    BFile { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
