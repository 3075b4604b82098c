//! Online stopping indicators: per-epoch criterion values, firing traces,
//! stop epochs, and the omniscient-oracle baseline.
//!
//! The criterion-value functions (`gl_value`, `p_value`, ...) are total over
//! the curve: epochs with insufficient history or a degenerate denominator
//! yield `None` rather than an error, so batch evaluation never aborts
//! mid-curve. Hard precondition violations (epoch out of range, zero strip
//! length) are reported as errors.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::correlate::{coi_value, CoiConfig};
use crate::curve::ErrorCurve;
use crate::error::{Error, Result};

/// Divisor guard for the productivity quotient: pq is undefined whenever
/// the progress value does not exceed this, so flat training error cannot
/// fire the rule on numerical noise.
pub const PQ_DIV_EPSILON: f64 = 1e-9;

/// Default numerator factor of the progress ratio.
pub const DEFAULT_P_SCALE: f64 = 100.0;

/// One stopping rule with its parameters.
#[derive(Debug, Clone, PartialEq)]
pub enum IndicatorConfig {
    /// Generalization loss above `alpha`.
    Gl { alpha: f64 },
    /// Training progress over a strip of length `k` below `alpha`.
    P { k: usize, alpha: f64, scale: f64 },
    /// Productivity quotient (gl over progress) above `alpha`.
    Pq { k: usize, alpha: f64 },
    /// Validation error increased across `s` consecutive strips of length `k`.
    Up { s: usize, k: usize },
    /// High noise ratio of training error over a strip above `alpha`.
    Hnr { k: usize, alpha: f64 },
    /// Overfitting gain (train/val gap over its running minimum) above `alpha`.
    Og { alpha: f64 },
    /// Primary rule: stop once the epoch count reaches `m`.
    Mne { m: usize },
    /// Correlation of online indicators.
    Coi(CoiConfig),
    /// Omniscient baseline stopping at the lowest validation error.
    Oracle,
}

impl IndicatorConfig {
    /// Progress rule with the standard scale factor of 100.
    pub fn p(k: usize, alpha: f64) -> Self {
        IndicatorConfig::P {
            k,
            alpha,
            scale: DEFAULT_P_SCALE,
        }
    }

    /// Short family name used in file formats and rankings.
    pub fn name(&self) -> &'static str {
        match self {
            IndicatorConfig::Gl { .. } => "gl",
            IndicatorConfig::P { .. } => "p",
            IndicatorConfig::Pq { .. } => "pq",
            IndicatorConfig::Up { .. } => "up",
            IndicatorConfig::Hnr { .. } => "hnr",
            IndicatorConfig::Og { .. } => "og",
            IndicatorConfig::Mne { .. } => "mne",
            IndicatorConfig::Coi(_) => "coi",
            IndicatorConfig::Oracle => "oracle",
        }
    }

    /// Parameter part of the canonical spec string (empty for the oracle).
    pub fn params_string(&self) -> String {
        match self {
            IndicatorConfig::Gl { alpha } | IndicatorConfig::Og { alpha } => fmt_param(*alpha),
            IndicatorConfig::P { k, alpha, scale } => {
                if *scale == DEFAULT_P_SCALE {
                    format!("{k}:{}", fmt_param(*alpha))
                } else {
                    format!("{k}:{}:{}", fmt_param(*alpha), fmt_param(*scale))
                }
            }
            IndicatorConfig::Pq { k, alpha } | IndicatorConfig::Hnr { k, alpha } => {
                format!("{k}:{}", fmt_param(*alpha))
            }
            IndicatorConfig::Up { s, k } => format!("{s}:{k}"),
            IndicatorConfig::Mne { m } => format!("{m}"),
            IndicatorConfig::Coi(cfg) => format!("{}:{}", cfg.k, fmt_param(cfg.alpha_corr)),
            IndicatorConfig::Oracle => String::new(),
        }
    }

    /// Check the config invariants: finite thresholds, positive counts.
    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidConfig(msg));
        match self {
            IndicatorConfig::Gl { alpha } | IndicatorConfig::Og { alpha } => {
                if !alpha.is_finite() {
                    return bad(format!("{}: threshold must be finite", self.name()));
                }
            }
            IndicatorConfig::P { k, alpha, scale } => {
                if *k < 2 {
                    return bad(format!("p: strip length {k} < 2"));
                }
                if !alpha.is_finite() || !scale.is_finite() {
                    return bad(String::from("p: threshold and scale must be finite"));
                }
            }
            IndicatorConfig::Pq { k, alpha } | IndicatorConfig::Hnr { k, alpha } => {
                if *k < 2 {
                    return bad(format!("{}: strip length {k} < 2", self.name()));
                }
                if !alpha.is_finite() {
                    return bad(format!("{}: threshold must be finite", self.name()));
                }
            }
            IndicatorConfig::Up { s, k } => {
                if *s < 1 || *k < 1 {
                    return bad(format!("up: s={s}, k={k} must be positive"));
                }
            }
            IndicatorConfig::Mne { m } => {
                if *m < 1 {
                    return bad(String::from("mne: epoch count must be positive"));
                }
            }
            IndicatorConfig::Coi(cfg) => cfg.validate()?,
            IndicatorConfig::Oracle => {}
        }
        Ok(())
    }

    /// Strip length for strip-aligned rules; None for per-epoch rules.
    pub fn strip_len(&self) -> Option<usize> {
        match self {
            IndicatorConfig::P { k, .. }
            | IndicatorConfig::Pq { k, .. }
            | IndicatorConfig::Up { k, .. }
            | IndicatorConfig::Hnr { k, .. } => Some(*k),
            IndicatorConfig::Coi(cfg) => Some(cfg.k),
            _ => None,
        }
    }
}

impl core::fmt::Display for IndicatorConfig {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        let params = self.params_string();
        if params.is_empty() {
            f.write_str(self.name())
        } else {
            write!(f, "{}:{params}", self.name())
        }
    }
}

/// Float parameter formatting: whole numbers keep a trailing `.0` so that
/// `gl:1.0` round-trips, everything else uses the shortest exact form.
pub fn fmt_param(v: f64) -> String {
    format!("{v:?}")
}

/// Whether strip rules evaluate only at strip boundaries or at every epoch.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum EvalMode {
    /// Evaluate at epochs divisible by the strip length `k`.
    #[default]
    StripAligned,
    /// Evaluate wherever history suffices.
    EveryEpoch,
}

impl EvalMode {
    fn active(self, e: usize, k: usize) -> bool {
        match self {
            EvalMode::StripAligned => e.is_multiple_of(k),
            EvalMode::EveryEpoch => true,
        }
    }
}

/// Per-epoch criterion values and firing series for one indicator on one
/// curve. `values[e]` is `None` on warm-up or otherwise undefined epochs,
/// and the rule never fires there.
#[derive(Debug, Clone, PartialEq)]
pub struct IndicatorTrace {
    config: IndicatorConfig,
    values: Vec<Option<f64>>,
    fires: Vec<bool>,
}

impl IndicatorTrace {
    /// Assemble a trace from recorded series, checking that both series
    /// agree in length and that the rule never fires on an undefined value.
    pub fn from_parts(
        config: IndicatorConfig,
        values: Vec<Option<f64>>,
        fires: Vec<bool>,
    ) -> Result<Self> {
        if values.len() != fires.len() {
            return Err(Error::InvalidConfig(format!(
                "trace series differ in length: {} values, {} firings",
                values.len(),
                fires.len()
            )));
        }
        if values.iter().zip(&fires).any(|(v, &f)| f && v.is_none()) {
            return Err(Error::InvalidConfig(String::from(
                "trace fires on an undefined value",
            )));
        }
        Ok(Self {
            config,
            values,
            fires,
        })
    }

    pub fn config(&self) -> &IndicatorConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Criterion value at epoch `e` (1-based).
    pub fn value(&self, e: usize) -> Option<f64> {
        self.values[e - 1]
    }

    /// Whether the rule fires at epoch `e` (1-based).
    pub fn fires(&self, e: usize) -> bool {
        self.fires[e - 1]
    }

    pub fn values(&self) -> &[Option<f64>] {
        &self.values
    }

    pub fn firing_series(&self) -> &[bool] {
        &self.fires
    }
}

/// Stop decision for one (curve, indicator) pair.
#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub indicator: IndicatorConfig,
    pub stop_epoch: usize,
    /// True when no firing occurred at or before the horizon and the
    /// primary rule produced the stop.
    pub out_of_range: bool,
    pub val_error_at_stop: f64,
}

/// Minimal validation error observed in epochs up to `e`.
pub fn optimal_error(curve: &ErrorCurve, e: usize) -> Result<f64> {
    curve.check_epoch(e)?;
    let mut min = curve.val_error(1);
    for epoch in 2..=e {
        let v = curve.val_error(epoch);
        if v < min {
            min = v;
        }
    }
    Ok(min)
}

/// Generalization loss at `e`: percentage excess of the current validation
/// error over its running minimum. Undefined when that minimum is zero.
pub fn gl_value(curve: &ErrorCurve, e: usize) -> Result<Option<f64>> {
    let opt = optimal_error(curve, e)?;
    if opt == 0.0 {
        return Ok(None);
    }
    Ok(Some(100.0 * (curve.val_error(e) / opt - 1.0)))
}

/// Training progress over the strip ending at `e`: how far the strip mean
/// sits above the strip minimum, scaled by `scale`. Undefined before the
/// first full strip or when the strip minimum is zero.
pub fn p_value(curve: &ErrorCurve, e: usize, k: usize, scale: f64) -> Result<Option<f64>> {
    curve.check_epoch(e)?;
    if k == 0 {
        return Err(Error::InvalidConfig(String::from("p: strip length 0")));
    }
    if e < k {
        return Ok(None);
    }
    let mut sum = 0.0;
    let mut min = f64::INFINITY;
    for epoch in (e - k + 1)..=e {
        let v = curve.train_error(epoch);
        sum += v;
        if v < min {
            min = v;
        }
    }
    if min == 0.0 {
        return Ok(None);
    }
    Ok(Some(scale * (sum / (k as f64 * min) - 1.0)))
}

/// Productivity quotient: generalization loss divided by progress (at the
/// default scale). Undefined when either part is, or when progress does
/// not exceed [`PQ_DIV_EPSILON`].
pub fn pq_value(curve: &ErrorCurve, e: usize, k: usize) -> Result<Option<f64>> {
    let gl = match gl_value(curve, e)? {
        Some(v) => v,
        None => return Ok(None),
    };
    let p = match p_value(curve, e, k, DEFAULT_P_SCALE)? {
        Some(v) => v,
        None => return Ok(None),
    };
    if p <= PQ_DIV_EPSILON {
        return Ok(None);
    }
    Ok(Some(gl / p))
}

/// Validation error increased across `s` consecutive strips of length `k`
/// ending at `e`. False whenever history is insufficient.
pub fn up_fires(curve: &ErrorCurve, e: usize, s: usize, k: usize) -> Result<bool> {
    curve.check_epoch(e)?;
    if s == 0 || k == 0 {
        return Err(Error::InvalidConfig(String::from(
            "up: s and k must be positive",
        )));
    }
    if e <= s * k {
        return Ok(false);
    }
    let mut epoch = e;
    for _ in 0..s {
        if curve.val_error(epoch) <= curve.val_error(epoch - k) {
            return Ok(false);
        }
        epoch -= k;
    }
    Ok(true)
}

/// High noise ratio: sum of second differences of training error over the
/// strip, normalized by the summed training error. Undefined before epoch
/// k + 3 or when the denominator is zero.
pub fn hnr_value(curve: &ErrorCurve, e: usize, k: usize) -> Result<Option<f64>> {
    curve.check_epoch(e)?;
    if k == 0 {
        return Err(Error::InvalidConfig(String::from("hnr: strip length 0")));
    }
    if e < k + 3 {
        return Ok(None);
    }
    let mut num = 0.0;
    let mut den = 0.0;
    for epoch in (e - k)..=(e - 1) {
        let t = curve.train_error(epoch);
        num += t - 2.0 * curve.train_error(epoch - 1) + curve.train_error(epoch - 2);
        den += t;
    }
    if den == 0.0 {
        return Ok(None);
    }
    Ok(Some(num / den))
}

/// Overfitting gain: the train/validation gap in excess of the smallest gap
/// observed so far. Always defined and non-negative.
pub fn og_value(curve: &ErrorCurve, e: usize) -> Result<f64> {
    curve.check_epoch(e)?;
    let gap = |epoch: usize| (curve.train_error(epoch) - curve.val_error(epoch)).abs();
    let mut min = f64::INFINITY;
    for epoch in 1..=e {
        let g = gap(epoch);
        if g < min {
            min = g;
        }
    }
    Ok(gap(e) - min)
}

/// Earliest epoch in [1, h] with the lowest validation error.
pub fn oracle_stop(curve: &ErrorCurve, h: usize) -> Result<usize> {
    if h < 1 || h > curve.len() {
        return Err(Error::BadHorizon {
            horizon: h,
            len: curve.len(),
        });
    }
    let mut best_epoch = 1;
    let mut best = curve.val_error(1);
    for e in 2..=h {
        let v = curve.val_error(e);
        if v < best {
            best = v;
            best_epoch = e;
        }
    }
    Ok(best_epoch)
}

/// Evaluate an indicator over a whole curve with strip rules aligned to
/// strip boundaries (the default reading of a training strip).
pub fn evaluate_trace(curve: &ErrorCurve, config: &IndicatorConfig) -> Result<IndicatorTrace> {
    evaluate_trace_with(curve, config, EvalMode::StripAligned)
}

/// Evaluate an indicator over a whole curve under an explicit mode.
pub fn evaluate_trace_with(
    curve: &ErrorCurve,
    config: &IndicatorConfig,
    mode: EvalMode,
) -> Result<IndicatorTrace> {
    config.validate()?;
    let n = curve.len();
    let mut values: Vec<Option<f64>> = Vec::with_capacity(n);
    let mut fires: Vec<bool> = Vec::with_capacity(n);

    match config {
        IndicatorConfig::Gl { alpha } => {
            for e in 1..=n {
                let v = gl_value(curve, e)?;
                values.push(v);
                fires.push(matches!(v, Some(x) if x > *alpha));
            }
        }
        IndicatorConfig::Og { alpha } => {
            for e in 1..=n {
                let v = og_value(curve, e)?;
                values.push(Some(v));
                fires.push(v > *alpha);
            }
        }
        IndicatorConfig::Mne { m } => {
            for e in 1..=n {
                values.push(Some(e as f64));
                fires.push(e >= *m);
            }
        }
        IndicatorConfig::P { k, alpha, scale } => {
            for e in 1..=n {
                let v = if mode.active(e, *k) {
                    p_value(curve, e, *k, *scale)?
                } else {
                    None
                };
                values.push(v);
                fires.push(matches!(v, Some(x) if x < *alpha));
            }
        }
        IndicatorConfig::Pq { k, alpha } => {
            for e in 1..=n {
                let v = if mode.active(e, *k) {
                    pq_value(curve, e, *k)?
                } else {
                    None
                };
                values.push(v);
                fires.push(matches!(v, Some(x) if x > *alpha));
            }
        }
        IndicatorConfig::Hnr { k, alpha } => {
            for e in 1..=n {
                let v = if mode.active(e, *k) {
                    hnr_value(curve, e, *k)?
                } else {
                    None
                };
                values.push(v);
                fires.push(matches!(v, Some(x) if x > *alpha));
            }
        }
        IndicatorConfig::Up { s, k } => {
            for e in 1..=n {
                if mode.active(e, *k) && e > s * k {
                    let f = up_fires(curve, e, *s, *k)?;
                    values.push(Some(if f { 1.0 } else { 0.0 }));
                    fires.push(f);
                } else {
                    values.push(None);
                    fires.push(false);
                }
            }
        }
        IndicatorConfig::Coi(cfg) => {
            let traces: Vec<IndicatorTrace> = cfg
                .pool
                .iter()
                .map(|member| evaluate_trace_with(curve, member, mode))
                .collect::<Result<_>>()?;
            for e in 1..=n {
                let v = if mode.active(e, cfg.k) {
                    coi_value(&traces, cfg, e)?
                } else {
                    None
                };
                values.push(v);
                fires.push(matches!(v, Some(x) if x > cfg.alpha_corr));
            }
        }
        IndicatorConfig::Oracle => {
            // Omniscient over the recorded curve: the trace fires exactly at
            // the earliest epoch with the lowest validation error of the
            // whole series. Not horizon-aware; `run` goes through
            // `oracle_stop` instead.
            let stop = oracle_stop(curve, n)?;
            for e in 1..=n {
                values.push(Some(optimal_error(curve, e)?));
                fires.push(e == stop);
            }
        }
    }

    Ok(IndicatorTrace {
        config: config.clone(),
        values,
        fires,
    })
}

/// First firing epoch within the horizon, or the horizon itself with
/// `out_of_range` set when the primary rule had to stop the run.
pub fn stop_epoch(curve: &ErrorCurve, trace: &IndicatorTrace, h: usize) -> Result<RunOutcome> {
    if h < 1 || h > trace.len() || trace.len() > curve.len() {
        return Err(Error::BadHorizon {
            horizon: h,
            len: trace.len().min(curve.len()),
        });
    }
    let fired = (1..=h).find(|&e| trace.fires(e));
    let stop = fired.unwrap_or(h);
    Ok(RunOutcome {
        indicator: trace.config().clone(),
        stop_epoch: stop,
        out_of_range: fired.is_none(),
        val_error_at_stop: curve.val_error(stop),
    })
}

/// Evaluate a config to its stop decision over horizon `h`. The oracle is
/// resolved directly from the validation series and is never out-of-range.
pub fn run(curve: &ErrorCurve, config: &IndicatorConfig, h: usize) -> Result<RunOutcome> {
    run_with(curve, config, h, EvalMode::StripAligned)
}

pub fn run_with(
    curve: &ErrorCurve,
    config: &IndicatorConfig,
    h: usize,
    mode: EvalMode,
) -> Result<RunOutcome> {
    if let IndicatorConfig::Oracle = config {
        let stop = oracle_stop(curve, h)?;
        return Ok(RunOutcome {
            indicator: IndicatorConfig::Oracle,
            stop_epoch: stop,
            out_of_range: false,
            val_error_at_stop: curve.val_error(stop),
        });
    }
    let trace = evaluate_trace_with(curve, config, mode)?;
    stop_epoch(curve, &trace, h)
}
