//! Epoch-indexed error curves and the error/accuracy transforms.
//!
//! A curve holds one training-error series and one validation-error series,
//! both indexed by epoch starting at 1. Values are percentages when derived
//! from accuracy, but raw losses above 100 are accepted on ingestion.

use alloc::collections::BTreeSet;
use alloc::string::String;
use alloc::vec::Vec;

use crate::error::{Error, Result, Series};

/// Validated pair of train/validation error series for one kernel.
///
/// Immutable after construction; all public accessors speak 1-based epochs.
#[derive(Debug, Clone, PartialEq)]
pub struct ErrorCurve {
    id: String,
    train: Vec<f64>,
    val: Vec<f64>,
}

impl ErrorCurve {
    /// Build a curve, checking that both series are non-empty, equal in
    /// length, finite and non-negative. Values above 100 are allowed.
    pub fn new(id: impl Into<String>, train: Vec<f64>, val: Vec<f64>) -> Result<Self> {
        if train.is_empty() || val.is_empty() {
            return Err(Error::EmptyCurve);
        }
        if train.len() != val.len() {
            return Err(Error::LengthMismatch {
                train: train.len(),
                val: val.len(),
            });
        }
        for (series, values) in [(Series::Train, &train), (Series::Val, &val)] {
            for (i, &v) in values.iter().enumerate() {
                if !v.is_finite() || v < 0.0 {
                    return Err(Error::BadValue {
                        series,
                        epoch: i + 1,
                        value: v,
                    });
                }
            }
        }
        Ok(Self {
            id: id.into(),
            train,
            val,
        })
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    /// Number of epochs; epochs are numbered 1..=len().
    pub fn len(&self) -> usize {
        self.train.len()
    }

    pub fn is_empty(&self) -> bool {
        // new() rejects empty series, so this is always false.
        self.train.is_empty()
    }

    /// Training error at epoch `e` (1-based). Panics outside 1..=len().
    pub fn train_error(&self, e: usize) -> f64 {
        self.train[e - 1]
    }

    /// Validation error at epoch `e` (1-based). Panics outside 1..=len().
    pub fn val_error(&self, e: usize) -> f64 {
        self.val[e - 1]
    }

    /// Raw training series; index 0 holds epoch 1.
    pub fn train_values(&self) -> &[f64] {
        &self.train
    }

    /// Raw validation series; index 0 holds epoch 1.
    pub fn val_values(&self) -> &[f64] {
        &self.val
    }

    pub(crate) fn check_epoch(&self, e: usize) -> Result<()> {
        if e < 1 || e > self.len() {
            return Err(Error::EpochOutOfRange {
                epoch: e,
                len: self.len(),
            });
        }
        Ok(())
    }
}

/// Gold and predicted dependency-head sets for one dataset.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct HeadSets {
    pub gold: BTreeSet<String>,
    pub predicted: BTreeSet<String>,
}

/// Error as the simple counterpart of accuracy: 100 - accuracy.
pub fn error_from_accuracy(accuracy: f64) -> Result<f64> {
    if !accuracy.is_finite() || !(0.0..=100.0).contains(&accuracy) {
        return Err(Error::AccuracyOutOfRange(accuracy));
    }
    Ok(100.0 - accuracy)
}

/// Percentage of gold heads recovered: 100 * |predicted ∩ gold| / |gold|.
pub fn head_accuracy(h: &HeadSets) -> Result<f64> {
    if h.gold.is_empty() {
        return Err(Error::EmptyGoldSet);
    }
    let hits = h.predicted.intersection(&h.gold).count();
    Ok(100.0 * hits as f64 / h.gold.len() as f64)
}
