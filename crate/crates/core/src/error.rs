use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("2s must be in 1..={max}, got {got}")]
    SpinOutOfRange { got: u32, max: u32 },

    #[error("polar angle must lie in [0, pi], got {0}")]
    PolarAngle(f64),

    #[error("non-finite {name}: {value}")]
    NonFinite { name: &'static str, value: f64 },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("outcome probability {value} of category {category} is negative")]
    NegativeProbability { category: usize, value: f64 },

    #[error("{0} must be at least 1")]
    ZeroCount(&'static str),

    #[error("invalid search spec: {0}")]
    InvalidSearch(String),
}
