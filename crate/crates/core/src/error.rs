use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("amplitude array has length {got}, expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("amplitude array has zero norm")]
    ZeroNorm,

    #[error("qubit {qubit} out of range for a {n_qubits}-qubit state")]
    QubitOutOfRange { qubit: usize, n_qubits: usize },

    #[error("qubit {0} used more than once in a gate")]
    OverlappingQubits(usize),

    #[error("register sizes differ: {left} vs {right}")]
    RegisterMismatch { left: usize, right: usize },

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("measured qubit list is empty")]
    NothingMeasured,

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("post-selection retained no shots")]
    PostSelectionExhausted,

    #[error("label value {0} is not in {{-1, +1}}")]
    InvalidLabel(f64),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("training set is empty")]
    EmptyTrainingSet,

    #[error("k = {k} is invalid for {n} training samples")]
    InvalidK { k: usize, n: usize },

    #[error("class {0} is absent from the data")]
    MissingClass(i8),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("dataset error: {0}")]
    Dataset(String),

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
