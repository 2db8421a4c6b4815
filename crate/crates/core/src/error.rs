use thiserror::Error;

/// Errors raised by the metric routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum MetricsError {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("degenerate direction: the tangent vector is zero")]
    DegenerateDirection,
    #[error("pole: {0}")]
    Pole(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("invalid witness: {0}")]
    InvalidWitness(String),
    #[error("construction error: {0}")]
    Construction(String),
    #[error("sampling error: {0}")]
    Sampling(String),
    #[error("domain sampling error: acceptance rate {rate:.4} below {min:.4}")]
    DomainSampling { rate: f64, min: f64 },
    #[error("optimization failure: {0}")]
    Optimization(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("invalid configuration: {0}")]
    Config(String),
}

pub type Result<T, E = MetricsError> = std::result::Result<T, E>;
