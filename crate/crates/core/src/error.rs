use std::path::PathBuf;

use thiserror::Error;

/// Errors raised by the simulation, training and data layers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("qubit index {index} out of range for {n_qubits}-qubit register")]
    QubitIndex { index: usize, n_qubits: usize },

    #[error(
        "eigensolver did not converge after {sweeps} sweeps (off-diagonal mass {off_diagonal:e})"
    )]
    NoConvergence { sweeps: usize, off_diagonal: f64 },

    #[error("objective returned non-finite value {value} at evaluation {evaluation}")]
    NonFiniteObjective { evaluation: usize, value: f64 },

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("file not found: {}", .0.display())]
    MissingFile(PathBuf),

    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: String, column: String },

    #[error("{path}: row {row} has {found} fields, expected {expected}")]
    RaggedRow {
        path: String,
        row: usize,
        found: usize,
        expected: usize,
    },

    #[error("{path}: row {row}, column `{column}`: cannot parse `{value}` as a number")]
    NonNumeric {
        path: String,
        row: usize,
        column: String,
        value: String,
    },

    #[error("csv: {0}")]
    Csv(#[from] csv::Error),

    #[error("io: {0}")]
    Io(#[from] std::io::Error),

    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
