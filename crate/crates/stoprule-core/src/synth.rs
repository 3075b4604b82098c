//! Deterministic synthetic learning curves with a controllable overfitting
//! onset, for tests and benchmarks.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::curve::ErrorCurve;
use crate::error::{Error, Result};

/// SplitMix64: a 64-bit mixing recurrence (Steele, Lea & Flood 2014).
/// State advances by the golden-gamma constant and the output is the
/// two-round xor-shift-multiply mix of the new state. The stream, and the
/// uniform doubles derived from it, are bit-exact in any language.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        Self { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    /// Uniform in [0, 1): the top 53 bits over 2^53.
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / 9007199254740992.0)
    }
}

/// Parameters of one synthetic curve: exponential decays toward a floor,
/// a piecewise-linear overfit ramp on the validation series from `onset`,
/// and uniform noise in [-noise_amp, noise_amp].
#[derive(Debug, Clone, PartialEq)]
pub struct CurveModel {
    pub n: usize,
    pub train_init: f64,
    pub train_floor: f64,
    pub lambda_train: f64,
    pub val_init: f64,
    pub val_floor: f64,
    pub lambda_val: f64,
    /// Epoch at which the overfit ramp starts contributing.
    pub onset: usize,
    /// Ramp slope per epoch past the onset.
    pub ramp: f64,
    pub noise_amp: f64,
    pub seed: u64,
}

impl CurveModel {
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidModel(msg));
        if self.n < 1 {
            return bad(String::from("epoch count must be at least 1"));
        }
        if self.onset < 1 || self.onset > self.n {
            return bad(format!("onset {} outside 1..={}", self.onset, self.n));
        }
        for (name, v) in [
            ("train_init", self.train_init),
            ("train_floor", self.train_floor),
            ("val_init", self.val_init),
            ("val_floor", self.val_floor),
        ] {
            if !v.is_finite() || v < 0.0 {
                return bad(format!("{name} = {v} must be finite and >= 0"));
            }
        }
        for (name, v) in [
            ("lambda_train", self.lambda_train),
            ("lambda_val", self.lambda_val),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return bad(format!("{name} = {v} must be finite and > 0"));
            }
        }
        if !self.ramp.is_finite() || self.ramp < 0.0 {
            return bad(format!("ramp = {} must be finite and >= 0", self.ramp));
        }
        if !self.noise_amp.is_finite() || self.noise_amp < 0.0 {
            return bad(format!(
                "noise_amp = {} must be finite and >= 0",
                self.noise_amp
            ));
        }
        Ok(())
    }

    /// Noiseless validation error at (integer) epoch `e`; the analytic
    /// reference for the generated series.
    pub fn noiseless_val(&self, e: usize) -> f64 {
        let decay = self.val_floor
            + (self.val_init - self.val_floor) * libm::exp(-self.lambda_val * e as f64);
        let overshoot = if e > self.onset {
            self.ramp * (e - self.onset) as f64
        } else {
            0.0
        };
        (decay + overshoot).max(0.0)
    }

    /// Noiseless training error at epoch `e`.
    pub fn noiseless_train(&self, e: usize) -> f64 {
        (self.train_floor
            + (self.train_init - self.train_floor) * libm::exp(-self.lambda_train * e as f64))
        .max(0.0)
    }
}

/// Generate the curve. For each epoch the train noise term is drawn first
/// and the validation one second, so the stream layout is part of the
/// format. Values clamp at zero.
///
/// The same seed gives byte-identical curves on every platform: the
/// exponential comes from the bundled pure-Rust `libm`, never the system
/// one. A reimplementation elsewhere matches the noise stream bit-exactly
/// and the curve itself to within 1 ulp of its `exp`.
pub fn generate(model: &CurveModel, id: impl Into<String>) -> Result<ErrorCurve> {
    model.validate()?;
    let mut rng = SplitMix64::new(model.seed);
    let mut train = Vec::with_capacity(model.n);
    let mut val = Vec::with_capacity(model.n);
    for e in 1..=model.n {
        let noise_train = model.noise_amp * (2.0 * rng.next_f64() - 1.0);
        let noise_val = model.noise_amp * (2.0 * rng.next_f64() - 1.0);
        train.push((model.noiseless_train(e) + noise_train).max(0.0));
        val.push((model.noiseless_val(e) + noise_val).max(0.0));
    }
    ErrorCurve::new(id, train, val)
}
