use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("no points")]
    NoPoints,
    #[error("point {index} has {found} coordinates, expected {expected}")]
    DimensionMismatch {
        index: usize,
        expected: usize,
        found: usize,
    },
    #[error("non-finite coordinate in point {0}")]
    NonFinite(usize),
    #[error("clustered sampler needs n divisible by 3, got {0}")]
    NotDivisibleByThree(usize),
    #[error("series of length {len} is too short for a window of {window}")]
    SeriesTooShort { len: usize, window: usize },
    #[error("invalid embedding: {0}")]
    InvalidEmbedding(String),
    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error("invalid filtration: {0}")]
    InvalidFiltration(String),
    #[error("degenerate simplex")]
    DegenerateSimplex,
    #[error("filtration has max_dim {max_dim}, homology dimension {hom_dim} needs simplices of dimension {needed}", needed = hom_dim + 1)]
    MaxDimTooSmall { max_dim: usize, hom_dim: usize },
    #[error("no diagram of dimension {0}")]
    MissingDimension(usize),
    #[error("diagram is already in birth-persistence coordinates")]
    AlreadyTransformed,
    #[error("unknown weight function `{0}`")]
    UnknownWeight(String),
    #[error("bandwidth matrix is not symmetric positive definite")]
    NotPositiveDefinite,
    #[error("invalid grid: {0}")]
    InvalidGrid(String),
    #[error("density grids have different layouts")]
    GridMismatch,
    #[error("atom at ({0}, {1}) lies outside the function's domain")]
    OutsideDomain(f64, f64),
    #[error("measure has zero total mass")]
    ZeroMass,
    #[error("measures mix coordinate systems")]
    MixedCoordinates,
    #[error("empty input: {0}")]
    Empty(&'static str),
    #[error("leave-one-out requires N ≥ 2, got {0}")]
    LeaveOneOut(usize),
    #[error("invalid bandwidth range: {0}")]
    InvalidRange(String),
    #[error("config error: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    /// Process exit code for the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::UnknownWeight(_) => 2,
            Error::Io { .. } | Error::Parse { .. } => 4,
            _ => 3,
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
