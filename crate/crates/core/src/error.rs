use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("input vector is empty")]
    EmptyInput,

    #[error("Hadamard transform needs a power-of-two length, got {len}")]
    NonPowerOfTwoLength { len: usize },

    #[error("Zadoff-Chu root {root} is not coprime with length {len}")]
    RootNotCoprime { root: usize, len: usize },

    #[error("interleaver stride {stride} does not divide length {len}")]
    StrideDoesNotDivide { stride: usize, len: usize },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("operation requires an even length, got {len}")]
    OddLength { len: usize },

    #[error("{blocks} subblocks do not divide length {len}")]
    SubblockMismatch { blocks: usize, len: usize },

    #[error("{groups} groups do not divide length {len}")]
    GroupMismatch { groups: usize, len: usize },

    #[error("PAPR of an all-zero signal is undefined")]
    ZeroSignal,

    #[error("QPSK mapping needs an even number of bits, got {count}")]
    OddBitCount { count: usize },

    #[error("CCDF needs at least one sample")]
    EmptySamples,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("incompatible combination {label}: {reason}")]
    IncompatibleCombination { label: String, reason: String },

    #[error("missing curve {0}")]
    MissingCurve(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, Error>;
