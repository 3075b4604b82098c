//! Per-family parameter grids and best-setting selection against the
//! oracle baseline.

use alloc::vec::Vec;

use crate::correlate::{default_pool, Coefficient, CoiConfig};
use crate::curve::ErrorCurve;
use crate::error::{Error, Result};
use crate::indicator::{run_with, EvalMode, IndicatorConfig, RunOutcome};
use crate::nemesid::{run_cost, Weights};

/// Indicator family selector for grids and tuning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum IndicatorKind {
    Mne,
    Gl,
    P,
    Pq,
    Up,
    Hnr,
    Og,
    Coi,
}

impl IndicatorKind {
    pub const ALL: [IndicatorKind; 8] = [
        IndicatorKind::Mne,
        IndicatorKind::Gl,
        IndicatorKind::P,
        IndicatorKind::Pq,
        IndicatorKind::Up,
        IndicatorKind::Hnr,
        IndicatorKind::Og,
        IndicatorKind::Coi,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            IndicatorKind::Mne => "mne",
            IndicatorKind::Gl => "gl",
            IndicatorKind::P => "p",
            IndicatorKind::Pq => "pq",
            IndicatorKind::Up => "up",
            IndicatorKind::Hnr => "hnr",
            IndicatorKind::Og => "og",
            IndicatorKind::Coi => "coi",
        }
    }
}

impl core::fmt::Display for IndicatorKind {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        f.write_str(self.name())
    }
}

/// Ordered candidate configurations for one family.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneGrid {
    pub kind: IndicatorKind,
    pub candidates: Vec<IndicatorConfig>,
}

/// The published tuning intervals, endpoints included:
/// mne m in 10..=100 step 10; gl, p, pq alpha in [1, 5] step 0.5 with k=5;
/// up fixed at s=k=5; hnr alpha in [5, 25] step 0.5 with k=5; og alpha in
/// [0.5, 5] step 0.5; coi alpha in [0.5, 1] step 0.1 with k=5.
pub fn grid_for(kind: IndicatorKind) -> TuneGrid {
    grid_for_coi(kind, Coefficient::Pearson, &default_pool())
}

/// Same grids, with the COI candidates built over an explicit coefficient
/// and pool.
pub fn grid_for_coi(
    kind: IndicatorKind,
    coefficient: Coefficient,
    pool: &[IndicatorConfig],
) -> TuneGrid {
    // Steps of 0.5 are exact in binary; the 0.1 steps of the coi grid are
    // built as i/10 so the 1.0 endpoint is exact.
    let half_steps =
        |lo_halves: i32, hi_halves: i32| (lo_halves..=hi_halves).map(|i| i as f64 * 0.5);
    let candidates: Vec<IndicatorConfig> = match kind {
        IndicatorKind::Mne => (1..=10)
            .map(|i| IndicatorConfig::Mne { m: i * 10 })
            .collect(),
        IndicatorKind::Gl => half_steps(2, 10)
            .map(|alpha| IndicatorConfig::Gl { alpha })
            .collect(),
        IndicatorKind::P => half_steps(2, 10)
            .map(|alpha| IndicatorConfig::p(5, alpha))
            .collect(),
        IndicatorKind::Pq => half_steps(2, 10)
            .map(|alpha| IndicatorConfig::Pq { k: 5, alpha })
            .collect(),
        IndicatorKind::Up => alloc::vec![IndicatorConfig::Up { s: 5, k: 5 }],
        IndicatorKind::Hnr => half_steps(10, 50)
            .map(|alpha| IndicatorConfig::Hnr { k: 5, alpha })
            .collect(),
        IndicatorKind::Og => half_steps(1, 10)
            .map(|alpha| IndicatorConfig::Og { alpha })
            .collect(),
        IndicatorKind::Coi => (5..=10)
            .map(|i| {
                IndicatorConfig::Coi(CoiConfig {
                    k: 5,
                    alpha_corr: i as f64 / 10.0,
                    coefficient,
                    pool: pool.to_vec(),
                })
            })
            .collect(),
    };
    TuneGrid { kind, candidates }
}

/// One evaluated grid candidate.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepEntry {
    pub config: IndicatorConfig,
    pub outcome: RunOutcome,
    /// |C(candidate) - C(baseline)|
    pub objective: f64,
    /// C(candidate) - C(baseline)
    pub signed_deviation: f64,
}

/// Grid sweep result: the winning configuration and the full table.
#[derive(Debug, Clone, PartialEq)]
pub struct TuneResult {
    pub best: IndicatorConfig,
    pub outcome: RunOutcome,
    pub objective: f64,
    pub sweep: Vec<SweepEntry>,
}

/// Sweep the family's grid over the curve and pick the candidate whose run
/// cost deviates least (in absolute value) from the oracle baseline.
///
/// Ties break toward the smaller signed deviation (early, cheap stops
/// preferred), then toward the earlier grid entry (smaller parameter).
/// Minimizing |C - C_B| here selects the same candidate as minimizing |phi|
/// in the frame of all candidates, without the circularity of the frame
/// normalizer.
pub fn tune(
    curve: &ErrorCurve,
    kind: IndicatorKind,
    horizon: usize,
    w: Weights,
    coi: Option<(Coefficient, &[IndicatorConfig])>,
) -> Result<TuneResult> {
    tune_with(curve, kind, horizon, w, coi, EvalMode::StripAligned)
}

pub fn tune_with(
    curve: &ErrorCurve,
    kind: IndicatorKind,
    horizon: usize,
    w: Weights,
    coi: Option<(Coefficient, &[IndicatorConfig])>,
    mode: EvalMode,
) -> Result<TuneResult> {
    let grid = match (kind, coi) {
        (IndicatorKind::Coi, Some((coefficient, pool))) => grid_for_coi(kind, coefficient, pool),
        (IndicatorKind::Coi, None) => return Err(Error::PoolRequired),
        (_, _) => grid_for(kind),
    };
    let baseline = run_with(curve, &IndicatorConfig::Oracle, horizon, mode)?;
    let base_cost = run_cost(&baseline, w);

    let mut sweep = Vec::with_capacity(grid.candidates.len());
    for config in &grid.candidates {
        let outcome = run_with(curve, config, horizon, mode)?;
        let signed_deviation = run_cost(&outcome, w) - base_cost;
        sweep.push(SweepEntry {
            config: config.clone(),
            outcome,
            objective: signed_deviation.abs(),
            signed_deviation,
        });
    }

    let mut best = 0;
    for i in 1..sweep.len() {
        let better = sweep[i].objective < sweep[best].objective
            || (sweep[i].objective == sweep[best].objective
                && sweep[i].signed_deviation < sweep[best].signed_deviation);
        if better {
            best = i;
        }
    }
    let winner = &sweep[best];
    Ok(TuneResult {
        best: winner.config.clone(),
        outcome: winner.outcome.clone(),
        objective: winner.objective,
        sweep,
    })
}
