//! Error type shared by all core modules.

use alloc::string::String;
use core::fmt;

/// Which error series a value belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Series {
    Train,
    Val,
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Series::Train => f.write_str("train_error"),
            Series::Val => f.write_str("val_error"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    /// A curve must carry at least one epoch.
    EmptyCurve,
    /// Train and validation series must have equal length.
    LengthMismatch { train: usize, val: usize },
    /// Error values must be finite and non-negative.
    BadValue {
        series: Series,
        epoch: usize,
        value: f64,
    },
    /// Epoch outside 1..=len.
    EpochOutOfRange { epoch: usize, len: usize },
    /// Accuracy must lie in [0, 100].
    AccuracyOutOfRange(f64),
    /// head_accuracy needs a non-empty gold set.
    EmptyGoldSet,
    /// The horizon must satisfy 1 <= h <= curve length.
    BadHorizon { horizon: usize, len: usize },
    /// An indicator configuration violates its invariants.
    InvalidConfig(String),
    /// coi_value was handed a trace list that does not match the pool.
    PoolMismatch { traces: usize, pool: usize },
    /// Tuning the COI family needs an explicit pool.
    PoolRequired,
    /// fork_check input sequences differ in length or are empty.
    BadSequences { a: usize, b: usize, c: usize },
    /// The conditioning sequence never takes one of its truth values.
    DegenerateConditioning,
    /// Cost weights must lie in (0, 1].
    BadWeight(f64),
    /// A synthetic curve model violates its invariants.
    InvalidModel(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::EmptyCurve => f.write_str("curve has no epochs"),
            Error::LengthMismatch { train, val } => write!(
                f,
                "train series has {train} epochs but validation series has {val}"
            ),
            Error::BadValue {
                series,
                epoch,
                value,
            } => write!(
                f,
                "{series} at epoch {epoch} is {value}; values must be finite and >= 0"
            ),
            Error::EpochOutOfRange { epoch, len } => {
                write!(f, "epoch {epoch} outside 1..={len}")
            }
            Error::AccuracyOutOfRange(a) => write!(f, "accuracy {a} outside [0, 100]"),
            Error::EmptyGoldSet => f.write_str("gold head set is empty"),
            Error::BadHorizon { horizon, len } => {
                write!(f, "horizon {horizon} invalid for a curve of {len} epochs")
            }
            Error::InvalidConfig(msg) => write!(f, "invalid indicator config: {msg}"),
            Error::PoolMismatch { traces, pool } => {
                write!(f, "got {traces} traces for a pool of {pool} indicators")
            }
            Error::PoolRequired => f.write_str("tuning coi requires an explicit pool"),
            Error::BadSequences { a, b, c } => write!(
                f,
                "event sequences must be non-empty and equal in length (got {a}, {b}, {c})"
            ),
            Error::DegenerateConditioning => {
                f.write_str("conditioning sequence is constant; conditional frequencies degenerate")
            }
            Error::BadWeight(w) => write!(f, "cost weight {w} outside (0, 1]"),
            Error::InvalidModel(msg) => write!(f, "invalid curve model: {msg}"),
        }
    }
}

impl core::error::Error for Error {}

pub type Result<T> = core::result::Result<T, Error>;
