use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not square: {rows} rows, row {row} has {cols} columns")]
    NonSquare { rows: usize, row: usize, cols: usize },

    #[error("matrix order {order} exceeds the supported maximum of {max}")]
    OrderTooLarge { order: usize, max: usize },

    #[error("qubit {qubit} is not normalized: sum of squared amplitudes is {norm}")]
    NotNormalized { qubit: usize, norm: f64 },

    #[error("invalid scheme: {0}")]
    InvalidScheme(String),

    #[error("spin assignment has length {found}, expected {expected}")]
    SpinLengthMismatch { expected: usize, found: usize },

    #[error("post-selection never succeeds: every spin configuration has zero amplitude")]
    VanishingState,

    #[error("deformed states are linearly dependent under the statistics (nu = {nu:e})")]
    DegenerateNorm { nu: f64 },

    #[error("dimension mismatch: expected {expected} particles, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported target class: {0}")]
    UnsupportedClass(String),

    #[error("n = {n} must be even for this construction")]
    OddN { n: usize },

    #[error("n = {n} is below the minimum of {min} for this construction")]
    TooSmall { n: usize, min: usize },

    #[error("no sample reached the fidelity threshold")]
    EmptyResult,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unknown catalog entry `{0}`")]
    UnknownCatalogEntry(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}
