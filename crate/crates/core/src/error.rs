use std::path::PathBuf;

use crate::series::ClassLabel;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("dataset is empty")]
    Empty,

    #[error("series is empty")]
    EmptySeries,

    #[error("instance {index} has length {found}, expected {expected}")]
    LengthMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },

    #[error("non-finite value at instance {index}, position {position}")]
    NonFiniteValue { index: usize, position: usize },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("need at least 2 instances to estimate a covariance, got {found}")]
    InsufficientSamples { found: usize },

    #[error("shrinkage target is singular: attribute {attribute} has zero variance")]
    DegenerateTarget { attribute: usize },

    #[error("matrix is not positive definite")]
    NotPositiveDefinite,

    #[error("all eigenvalues are below the rank tolerance")]
    ZeroMatrix,

    #[error("band radius {band} cannot connect series of lengths {left} and {right}")]
    InfeasibleBand { band: usize, left: usize, right: usize },

    #[error("invalid distance spec: {0}")]
    InvalidSpec(String),

    #[error("unknown generator {0:?} (expected cbf, cc or waveform)")]
    UnknownGenerator(String),

    #[error("label {0} not present in dataset")]
    UnknownLabel(ClassLabel),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("line {line}, field {field}: {message}")]
    Parse {
        line: usize,
        field: usize,
        message: String,
    },

    #[error("line {line} has {found} fields, expected {expected}")]
    RaggedRows {
        line: usize,
        expected: usize,
        found: usize,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
