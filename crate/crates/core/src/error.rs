use thiserror::Error;

/// Errors raised by the construction, scans and reports.
#[derive(Debug, Error)]
pub enum Error {
    #[error("non-finite input: {0}")]
    NonFinite(&'static str),

    #[error("invalid Fourier series: {0}")]
    InvalidSeries(String),

    #[error("bump radii: {0}")]
    BumpRadii(String),

    #[error("point outside the open disc: |u| = {0}")]
    OutsideDisc(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    #[error("rotation number: {0}")]
    Rotation(String),

    #[error("psi not admissible: {0}")]
    Psi(String),

    #[error("grid too coarse: {0}")]
    Grid(String),

    #[error("cost guard exceeded: {0}")]
    CostGuard(String),

    #[error("variant mismatch: {0}")]
    Variant(String),

    #[error("empty matrix")]
    EmptyMatrix,

    #[error("sampling too sparse: {0}")]
    Sampling(String),

    #[error("resonant pair: {0}")]
    Resonant(String),

    #[error("config: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
