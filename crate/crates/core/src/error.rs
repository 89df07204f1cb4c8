use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("{0} must contain at least one element")]
    Empty(&'static str),

    #[error("non-finite coordinate at position {0}")]
    NonFinite(usize),

    #[error("pool of {0} items exceeds the 63-bit labeling word")]
    PoolTooLarge(usize),

    #[error("word {bits:#x} does not fit in {n} bits")]
    LabelOutOfRange { bits: u64, n: u32 },

    #[error("item {index} already carries label {label}")]
    SameLabelFlip { index: usize, label: u8 },

    #[error("index {index} out of range for {len} items")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("exhaustive search refused: n = {n} exceeds the cap of {cap}")]
    OverCap { n: u32, cap: u32 },

    #[error("invalid speedup factor {0}: must be >= 1")]
    InvalidSpeedup(f64),

    #[error("invalid speedup regime: {0}")]
    InvalidRegime(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("total cost is zero; performance per cost is undefined")]
    ZeroCost,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}
