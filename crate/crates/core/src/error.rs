use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown domain tag `{0}` (expected ball, simplex or cube)")]
    UnknownDomain(String),

    #[error("moment sequence of order {have} cannot support a request needing order {need}")]
    OrderExhausted { need: u32, have: u32 },

    #[error("matrix is not positive definite (pivot {index} fails the sign test)")]
    NotPositiveDefinite { index: usize },

    #[error("scale factor must be strictly positive")]
    NonPositiveScale,

    #[error("point lies outside the closed domain")]
    OutsideDomain,

    #[error("sample is not on the boundary: generator `{label}` evaluates to {value} there")]
    NotOnBoundary { label: String, value: String },

    #[error("negative Gegenbauer parameter {0}")]
    NegativeParameter(f64),

    #[error("divided difference at a confluent knot needs derivative order {order}, which is unavailable")]
    ConfluentDerivative { order: usize },

    #[error("initialization is infeasible: localizing matrix of `{label}` is not positive definite")]
    InfeasibleInit { label: String },

    #[error("solver stopped after {iterations} iterations with gradient norm {gradient_norm:e} (tolerance {tol:e})")]
    NoConvergence {
        iterations: usize,
        gradient_norm: f64,
        tol: f64,
    },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
