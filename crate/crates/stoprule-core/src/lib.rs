//! Early-stopping analysis over epoch-indexed error curves.
//!
//! The crate evaluates the classic cross-validation stopping rules
//! (generalization loss, progress, productivity quotient, uninterrupted
//! progress, high noise ratio, overfitting gain, maximum epoch count), the
//! correlation-of-online-indicators (COI) compound rule, and the NEMESID
//! quality metric that scores each rule's stop against an omniscient-oracle
//! baseline within a local testing frame. A deterministic synthetic-curve
//! generator and the published tuning grids round out the toolkit.
//!
//! Everything operates on complete recorded curves; there is no streaming
//! state and no training-loop integration. The crate is `no_std` (with
//! `alloc`); file formats and the command-line harness live in the
//! companion `stoprule-cli` crate.

#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;
#[cfg(test)]
extern crate std;

pub mod correlate;
pub mod curve;
pub mod error;
pub mod indicator;
pub mod nemesid;
pub mod stats;
pub mod synth;
pub mod tuner;

pub use correlate::{
    coi_fires, coi_value, default_pool, fork_check, pearson, spearman, Coefficient, CoiConfig,
    ForkProbabilities, ForkReport,
};
pub use curve::{error_from_accuracy, head_accuracy, ErrorCurve, HeadSets};
pub use error::{Error, Result};
pub use indicator::{
    evaluate_trace, evaluate_trace_with, gl_value, hnr_value, og_value, optimal_error, oracle_stop,
    p_value, pq_value, run, run_with, stop_epoch, up_fires, EvalMode, IndicatorConfig,
    IndicatorTrace, RunOutcome, DEFAULT_P_SCALE, PQ_DIV_EPSILON,
};
pub use nemesid::{frame_report, mcdb, phi, run_cost, Frame, FrameReport, RunReport, Weights};
pub use synth::{generate, CurveModel, SplitMix64};
pub use tuner::{
    grid_for, grid_for_coi, tune, tune_with, IndicatorKind, SweepEntry, TuneGrid, TuneResult,
};
