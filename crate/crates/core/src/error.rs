use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("tensor dimension {0} x {1} overflows usize")]
    DimensionOverflow(usize, usize),

    #[error("dimension must be positive")]
    EmptyDimension,

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("vector is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("zero vector cannot be normalized")]
    ZeroVector,

    #[error("tolerance must lie in (0, 1), got {0}")]
    InvalidTolerance(f64),

    #[error("operator is not Hermitian (residual {residual:e})")]
    NotHermitian { residual: f64 },

    #[error("operator is not unitary (residual {residual:e})")]
    NotUnitary { residual: f64 },

    #[error("vectors are not orthonormal (residual {residual:e})")]
    NotOrthonormal { residual: f64 },

    #[error("too many columns: {count} vectors in dimension {dim}")]
    TooManyColumns { count: usize, dim: usize },

    #[error("invalid projector: {0}")]
    InvalidProjector(String),

    #[error("invalid spectral form: {0}")]
    InvalidSpectralForm(String),

    #[error("invalid measurement model: {0}")]
    InvalidModel(String),

    #[error("outcome index {index} out of range (outcome count {count})")]
    OutcomeOutOfRange { index: usize, count: usize },

    #[error("sub-projectors do not sum to the refined projector (residual {residual:e})")]
    RefinementMismatch { residual: f64 },

    #[error("invalid density operator: {0}")]
    InvalidDensity(String),

    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("sample count must be positive")]
    ZeroSamples,

    #[error("purified and trace-rule probabilities disagree ({purified} vs {trace_rule})")]
    RouteMismatch { purified: f64, trace_rule: f64 },
}

pub type Result<T> = std::result::Result<T, Error>;
