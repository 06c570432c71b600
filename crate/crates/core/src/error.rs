use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("index {index} out of range (len {len})")]
    Range { index: usize, len: usize },

    #[error("unsupported dimension: expected {expected}, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },

    #[error("degenerate input: {0}")]
    Degenerate(String),

    #[error("biases are not in the continuum case (fixed-point residual {residual:e})")]
    NotContinuum { residual: f64 },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("graph generation failed: no connected graph after {attempts} attempts")]
    GenerationFailed { attempts: u32 },

    #[error("numeric error: {0}")]
    Numeric(String),
}
