use std::collections::BTreeSet;

use rayon::prelude::*;
use stoprule_core::{
    frame_report, tune_with, EvalMode, Frame, FrameReport, IndicatorConfig, Weights,
};

use crate::cli::FrameArgs;
use crate::error::{CliError, Result};
use crate::load::load_curve_path;
use crate::output::{
    aggregate_json, check_report_invariants, frame_csv, frame_table, sanitize, write_atomic,
};
use crate::spec::{parse_indicator, parse_pool, IndicatorSpec, SpecContext};

pub fn run(args: FrameArgs) -> Result<()> {
    let mut ctx = SpecContext {
        strip_k: args.indicators.strip_k,
        coefficient: args.indicators.coef.into(),
        ..SpecContext::default()
    };
    if let Some(pool) = &args.indicators.pool {
        ctx.pool = parse_pool(pool, ctx.strip_k)?;
    }
    let specs: Vec<IndicatorSpec> = args
        .indicators
        .indicators
        .iter()
        .map(|s| parse_indicator(s, &ctx))
        .collect::<Result<_>>()?;
    let mode = args.indicators.mode();
    let weights = Weights::new(args.cost.w_mi, args.cost.w_ea)?;
    let horizon = args.cost.horizon;

    let curves: Vec<_> = args
        .input
        .curves
        .iter()
        .map(|path| load_curve_path(path, args.input.format))
        .collect::<Result<_>>()?;
    let mut seen = BTreeSet::new();
    for curve in &curves {
        if !seen.insert(curve.id().to_string()) {
            return Err(CliError::input(format!(
                "duplicate curve id {:?}; frame reports would collide",
                curve.id()
            )));
        }
    }

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(args.jobs.unwrap_or(0))
        .build()
        .map_err(|e| CliError::input(format!("cannot build thread pool: {e}")))?;

    // Frames are independent; each writes its own report atomically, and
    // the aggregate is assembled afterwards in input order.
    let results: Vec<Result<FrameReport>> = pool.install(|| {
        curves
            .par_iter()
            .map(|curve| {
                let report = evaluate_frame(curve, &specs, horizon, weights, &ctx, mode)?;
                check_report_invariants(&report)?;
                let path = args.out.join(format!("frame_{}.csv", sanitize(curve.id())));
                write_atomic(&path, &frame_csv(&report))?;
                Ok(report)
            })
            .collect()
    });

    let mut failures = 0usize;
    let mut reports = Vec::new();
    for (curve, result) in curves.iter().zip(&results) {
        match result {
            Ok(report) => {
                print!("{}", frame_table(report));
                reports.push(report);
            }
            Err(e) => {
                failures += 1;
                println!("frame {} failed: {e}", curve.id());
            }
        }
    }

    if !reports.is_empty() {
        let path = args.out.join("aggregate.json");
        write_atomic(&path, &aggregate_json(&reports, horizon, weights)?)?;
        println!("wrote {}", path.display());
    }

    if failures > 0 {
        // An internal invariant violation outranks input trouble.
        if let Some(internal) = results.iter().find_map(|r| match r {
            Err(e @ CliError::Internal(_)) => Some(e),
            _ => None,
        }) {
            return Err(CliError::internal(internal.to_string()));
        }
        return Err(CliError::input(format!(
            "{failures} of {} frames failed",
            curves.len()
        )));
    }
    Ok(())
}

fn evaluate_frame(
    curve: &stoprule_core::ErrorCurve,
    specs: &[IndicatorSpec],
    horizon: usize,
    weights: Weights,
    ctx: &SpecContext,
    mode: EvalMode,
) -> Result<FrameReport> {
    let mut configs: Vec<IndicatorConfig> = Vec::with_capacity(specs.len());
    for spec in specs {
        match spec {
            IndicatorSpec::Fixed(config) => configs.push(config.clone()),
            IndicatorSpec::Tuned(kind) => {
                let tuned = tune_with(
                    curve,
                    *kind,
                    horizon,
                    weights,
                    Some((ctx.coefficient, &ctx.pool)),
                    mode,
                )?;
                configs.push(tuned.best);
            }
        }
    }
    let frame = Frame::build(curve.id(), curve.clone(), horizon, &configs, mode)?;
    Ok(frame_report(&frame, weights))
}
