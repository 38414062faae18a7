use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid gate: {0}")]
    InvalidGate(String),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("parameter count mismatch: circuit has {expected} rotations, got {got} parameters")]
    ParamCount { expected: usize, got: usize },

    #[error("parameter index {index} out of range ({count} rotations)")]
    ParamIndex { index: usize, count: usize },

    #[error("circuit has no rotation parameters")]
    NoParameters,

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid Hamiltonian: {0}")]
    Hamiltonian(String),

    #[error("invalid graph: {0}")]
    Graph(String),

    #[error("invalid action {action} at cursor ({row}, {col})")]
    InvalidAction {
        action: usize,
        row: usize,
        col: usize,
    },

    #[error("grid is full")]
    GridFull,

    #[error("invalid circuit grid: {0}")]
    InvalidGrid(String),

    #[error("empty action mask")]
    EmptyMask,

    #[error("configuration error: {0}")]
    Config(String),

    #[error("data file {path}: {reason}")]
    Data { path: PathBuf, reason: String },

    #[error("{0}")]
    Empty(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Process exit code for the command-line driver.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_)
            | Error::Data { .. }
            | Error::Graph(_)
            | Error::Hamiltonian(_)
            | Error::Empty(_)
            | Error::Csv(_) => 2,
            Error::Numerical(_) => 3,
            _ => 1,
        }
    }
}
