//! The NEMESID quality metric: normalized signed cost deviation of a run
//! from the oracle baseline of its local testing frame, plus frame-level
//! reporting and ranking.

use alloc::string::{String, ToString};
use alloc::vec::Vec;

use crate::curve::ErrorCurve;
use crate::error::{Error, Result};
use crate::indicator::{oracle_stop, run_with, EvalMode, IndicatorConfig, RunOutcome};
use crate::stats;

/// Per-epoch and per-error-unit cost weights, both in (0, 1].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Weights {
    mi: f64,
    ea: f64,
}

impl Weights {
    pub fn new(mi: f64, ea: f64) -> Result<Self> {
        for w in [mi, ea] {
            if !w.is_finite() || w <= 0.0 || w > 1.0 {
                return Err(Error::BadWeight(w));
            }
        }
        Ok(Self { mi, ea })
    }

    pub fn mi(&self) -> f64 {
        self.mi
    }

    pub fn ea(&self) -> f64 {
        self.ea
    }
}

impl Default for Weights {
    /// The intermediate setting used throughout the evaluation protocol.
    fn default() -> Self {
        Self { mi: 0.5, ea: 0.5 }
    }
}

/// Cost of a run: weighted model-induction epochs plus weighted validation
/// error at the stop.
pub fn run_cost(outcome: &RunOutcome, w: Weights) -> f64 {
    w.mi * outcome.stop_epoch as f64 + w.ea * outcome.val_error_at_stop
}

/// A local testing frame: every run shares one kernel (curve) and one
/// horizon, and the baseline is the omniscient oracle on that horizon.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    kernel_id: String,
    curve: ErrorCurve,
    horizon: usize,
    baseline: RunOutcome,
    runs: Vec<RunOutcome>,
}

impl Frame {
    /// Evaluate `configs` over the curve and assemble the frame. The oracle
    /// baseline is computed here; passing an explicit Oracle config is
    /// rejected.
    pub fn build(
        kernel_id: impl Into<String>,
        curve: ErrorCurve,
        horizon: usize,
        configs: &[IndicatorConfig],
        mode: EvalMode,
    ) -> Result<Self> {
        let mut runs = Vec::with_capacity(configs.len());
        for config in configs {
            if matches!(config, IndicatorConfig::Oracle) {
                return Err(Error::InvalidConfig(String::from(
                    "the oracle is the frame baseline, not a run",
                )));
            }
            runs.push(run_with(&curve, config, horizon, mode)?);
        }
        Self::from_outcomes(kernel_id, curve, horizon, runs)
    }

    /// Assemble a frame from already-evaluated outcomes. The baseline is
    /// recomputed from the curve so its invariant cannot be violated.
    pub fn from_outcomes(
        kernel_id: impl Into<String>,
        curve: ErrorCurve,
        horizon: usize,
        runs: Vec<RunOutcome>,
    ) -> Result<Self> {
        let stop = oracle_stop(&curve, horizon)?;
        for run in &runs {
            if run.stop_epoch < 1 || run.stop_epoch > horizon {
                return Err(Error::EpochOutOfRange {
                    epoch: run.stop_epoch,
                    len: horizon,
                });
            }
        }
        let baseline = RunOutcome {
            indicator: IndicatorConfig::Oracle,
            stop_epoch: stop,
            out_of_range: false,
            val_error_at_stop: curve.val_error(stop),
        };
        Ok(Self {
            kernel_id: kernel_id.into(),
            curve,
            horizon,
            baseline,
            runs,
        })
    }

    pub fn kernel_id(&self) -> &str {
        &self.kernel_id
    }

    pub fn curve(&self) -> &ErrorCurve {
        &self.curve
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn baseline(&self) -> &RunOutcome {
        &self.baseline
    }

    pub fn runs(&self) -> &[RunOutcome] {
        &self.runs
    }
}

/// Maximum cost deviation from the baseline across the frame, the
/// normalizer of the metric. The baseline itself contributes zero, so an
/// empty frame yields 0.
pub fn mcdb(frame: &Frame, w: Weights) -> f64 {
    let base = run_cost(frame.baseline(), w);
    let mut max = 0.0f64;
    for run in frame.runs() {
        let dev = (run_cost(run, w) - base).abs();
        if dev > max {
            max = dev;
        }
    }
    max
}

/// The normalized signed deviation of one run, in [-1, 1]. Zero when the
/// frame has no cost spread.
pub fn phi(outcome: &RunOutcome, frame: &Frame, w: Weights) -> f64 {
    let m = mcdb(frame, w);
    if m == 0.0 {
        return 0.0;
    }
    let cost = run_cost(outcome, w);
    let base = run_cost(frame.baseline(), w);
    (cost - base + m) / m - 1.0
}

/// One ranked row of a frame report.
#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub indicator: IndicatorConfig,
    pub stop_epoch: usize,
    pub out_of_range: bool,
    pub cost: f64,
    pub phi: f64,
    pub rank: usize,
}

/// Baseline-relative scores and ranking for every run of one frame.
///
/// Rows are ordered by rank: in-range runs first by |phi| ascending, ties
/// by signed phi ascending (negative preferred) and then by indicator
/// name; out-of-range runs follow under the same order.
#[derive(Debug, Clone, PartialEq)]
pub struct FrameReport {
    pub kernel_id: String,
    pub horizon: usize,
    pub weights: Weights,
    pub baseline_stop: usize,
    pub baseline_cost: f64,
    pub mcdb: f64,
    pub rows: Vec<RunReport>,
    /// Mean of phi across the frame's runs (baseline excluded).
    pub phi_mean: f64,
    /// Population variance of phi across the frame's runs.
    pub phi_variance: f64,
}

pub fn frame_report(frame: &Frame, w: Weights) -> FrameReport {
    let m = mcdb(frame, w);
    let mut rows: Vec<RunReport> = frame
        .runs()
        .iter()
        .map(|run| RunReport {
            indicator: run.indicator.clone(),
            stop_epoch: run.stop_epoch,
            out_of_range: run.out_of_range,
            cost: run_cost(run, w),
            phi: phi(run, frame, w),
            rank: 0,
        })
        .collect();
    rows.sort_by(|a, b| {
        a.out_of_range
            .cmp(&b.out_of_range)
            .then_with(|| a.phi.abs().total_cmp(&b.phi.abs()))
            .then_with(|| a.phi.total_cmp(&b.phi))
            .then_with(|| a.indicator.to_string().cmp(&b.indicator.to_string()))
    });
    for (i, row) in rows.iter_mut().enumerate() {
        row.rank = i + 1;
    }
    let phis: Vec<f64> = rows.iter().map(|r| r.phi).collect();
    FrameReport {
        kernel_id: String::from(frame.kernel_id()),
        horizon: frame.horizon(),
        weights: w,
        baseline_stop: frame.baseline().stop_epoch,
        baseline_cost: run_cost(frame.baseline(), w),
        mcdb: m,
        rows,
        phi_mean: stats::mean(&phis).unwrap_or(0.0),
        phi_variance: stats::variance(&phis).unwrap_or(0.0),
    }
}
