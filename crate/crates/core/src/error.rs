use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input is empty")]
    EmptyInput,
    #[error("ground set needs at least one element")]
    EmptyGroundSet,
    #[error("index {index} out of range for {n} elements")]
    IndexOutOfRange { index: usize, n: usize },
    #[error("value {value} lies outside [0, 1]")]
    ValueOutOfRange { value: f64 },
    #[error("owa weight vector has {weights} entries, input has {values}")]
    OwaLengthMismatch { weights: usize, values: usize },
    #[error("owa weights must lie in [0, 1] and sum to 1 (sum = {sum})")]
    OwaWeights { sum: f64 },
    #[error("matrix dimensions differ: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("matrix entry at ({i}, {j}) is {value}, expected a finite value >= 0")]
    BadMatrixEntry { i: usize, j: usize, value: f64 },
    #[error("expected {expected} operator specs, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("gamma {gamma} lies outside [0, 1]")]
    GammaOutOfRange { gamma: f64 },
    #[error("graph has zero total weight")]
    ZeroTotalWeight,
    #[error("unknown community {community}")]
    UnknownCommunity { community: usize },
    #[error("node {node} is not an isolated community")]
    NodeNotIsolated { node: usize },
    #[error("exact Shapley computation supports at most {cap} elements, got {n}; use sampled estimation")]
    GroundSetTooLarge { n: usize, cap: usize },
    #[error("invalid fuzzy measure:\n{0}")]
    InvalidMeasure(String),
    #[error("partitions cover different node counts: {left} vs {right}")]
    NodeSetMismatch { left: usize, right: usize },
    #[error("invalid partition: {0}")]
    InvalidPartition(String),
    #[error("invalid benchmark spec: {0}")]
    InvalidSpec(String),
    #[error("sample count must be at least 1")]
    NoSamples,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Distinguishes numeric failures (degenerate arithmetic on otherwise
    /// well-formed inputs) from input/validation failures.
    pub fn is_numeric(&self) -> bool {
        matches!(self, Error::ZeroTotalWeight)
    }
}
