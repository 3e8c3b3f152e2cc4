use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian (residual {residual:.3e})")]
    NotHermitian { residual: f64 },

    #[error("matrix is not a projector (residual {residual:.3e})")]
    NotProjector { residual: f64 },

    #[error("dimension {dim} outside supported range {min}..={max}")]
    DimensionOutOfRange { dim: usize, min: usize, max: usize },

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("unsupported scenario: {0}")]
    UnsupportedScenario(String),

    #[error("parameter slice length mismatch: expected {expected}, got {got}")]
    ParameterCount { expected: usize, got: usize },

    #[error("deterministic-strategy enumeration over {settings} settings exceeds the 24-setting limit")]
    EnumerationTooLarge { settings: usize },

    #[error("stored classical bound {stored} does not match enumerated bound {computed}")]
    BoundMismatch { stored: f64, computed: f64 },

    #[error("state is not normalized (norm {norm})")]
    NotNormalized { norm: f64 },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("malformed inequality document: {0}")]
    Malformed(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
