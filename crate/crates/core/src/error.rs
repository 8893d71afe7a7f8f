use thiserror::Error;

/// Errors produced by the bimodal Gumbel toolkit.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum BgError {
    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("integral diverges: {0}")]
    Divergent(String),

    #[error("invalid integration range: a = {a}, b = {b}")]
    InvalidRange { a: f64, b: f64 },

    #[error("quadrature did not converge: value {value}, error estimate {estimate:e}")]
    QuadratureNonConvergence { value: f64, estimate: f64 },

    #[error("unsupported order {order} (maximum {max})")]
    UnsupportedOrder { order: usize, max: usize },

    #[error("weighted Gumbel of order {k} is undefined: E(Y^{k}) = {value:e}")]
    DegenerateWeight { k: usize, value: f64 },

    #[error("outside the representation regime: {0}")]
    Regime(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("could not isolate roots of g near x = {0}")]
    RootIsolation(f64),

    #[error("empty data")]
    EmptyData,

    #[error("need at least {needed} observations, got {got}")]
    InsufficientData { needed: usize, got: usize },

    #[error("degenerate data: all observations are equal")]
    DegenerateData,

    #[error("observed information is not positive definite")]
    SingularInformation,
}

pub type Result<T> = std::result::Result<T, BgError>;
