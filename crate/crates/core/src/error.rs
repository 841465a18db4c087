//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("width mismatch: expected {expected} bits, got {actual}")]
    WidthMismatch { expected: u8, actual: u8 },

    #[error("group factor {0} is not a power of two >= 2")]
    InvalidGroupFactor(u32),

    #[error("group too large: {0} bits (limit 12)")]
    GroupTooLarge(u8),

    #[error("qubit index {index} out of range for {n_qubits}-qubit state")]
    QubitOutOfRange { index: usize, n_qubits: usize },

    #[error("invalid register layout: {0}")]
    InvalidLayout(String),

    #[error("state is not normalized (norm {0})")]
    NotNormalized(f64),

    #[error("cannot sample from a zero-probability state or outcome")]
    ZeroNorm,

    #[error("path index {path} out of range for {n_paths} paths")]
    PathOutOfRange { path: usize, n_paths: usize },

    #[error("beam displacement would merge two occupied modes into path {path}")]
    ModeCollision { path: usize },

    #[error("time-bin overflow: occupied amplitude already in the last bin on path {path}")]
    TimeBinOverflow { path: usize },

    #[error("period is missing or the identity; nothing to de-duplicate")]
    TrivialPeriod,

    #[error("malformed coset cover: no representative for input {0}")]
    BadCosetCover(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("unsupported setup: {0}")]
    UnsupportedSetup(String),
}
