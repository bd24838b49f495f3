use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point cloud is empty")]
    EmptyCloud,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    /// The similarity matrix could not be factored as SPD at working precision,
    /// usually because two points are closer than the dedup tolerance allows.
    #[error("similarity matrix is numerically singular (pivot {pivot:e} at row {row})")]
    NumericallySingular { row: usize, pivot: f64 },

    #[error("diversifier solver did not converge in {iterations} iterations (KKT residual {residual:e})")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("subset-enumeration oracle supports at most {max} points, got {n}")]
    TooLarge { n: usize, max: usize },

    #[error("weighting-space norm has negative radicand {value:e}")]
    NegativeRadicand { value: f64 },

    #[error("invalid pass band [{low_hz}, {high_hz}] Hz for sampling rate {freq_hz} Hz")]
    InvalidBand { low_hz: f64, high_hz: f64, freq_hz: f64 },

    #[error("signal too short: {len} samples, embedding needs more than {needed}")]
    TooShort { len: usize, needed: usize },

    #[error("cannot remove {requested} of {available} points")]
    RemoveTooMany { requested: usize, available: usize },

    #[error("training loss became non-finite at epoch {epoch}")]
    NonFinite { epoch: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }
}
