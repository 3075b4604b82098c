use stoprule_core::{tune_with, EvalMode, IndicatorKind, Weights};

use crate::cli::TuneArgs;
use crate::error::Result;
use crate::load::load_curve_path;
use crate::output::{chosen_json, sanitize, sweep_csv, write_atomic};
use crate::spec::{parse_kind, parse_pool};

pub fn run(args: TuneArgs) -> Result<()> {
    let mut kinds: Vec<IndicatorKind> = Vec::new();
    for name in &args.kinds {
        if name.eq_ignore_ascii_case("all") {
            kinds.extend(IndicatorKind::ALL);
        } else {
            kinds.push(parse_kind(&name.to_ascii_lowercase())?);
        }
    }
    kinds.dedup();

    let pool = match &args.pool {
        Some(spec) => parse_pool(spec, args.strip_k)?,
        None => stoprule_core::default_pool(),
    };
    let weights = Weights::new(args.cost.w_mi, args.cost.w_ea)?;
    let mode = if args.every_epoch {
        EvalMode::EveryEpoch
    } else {
        EvalMode::StripAligned
    };

    for path in &args.input.curves {
        let curve = load_curve_path(path, args.input.format)?;
        for &kind in &kinds {
            let result = tune_with(
                &curve,
                kind,
                args.cost.horizon,
                weights,
                Some((args.coef.into(), &pool)),
                mode,
            )?;
            let stem = format!("tune_{}_{kind}", sanitize(curve.id()));
            let csv_path = args.out.join(format!("{stem}.csv"));
            write_atomic(&csv_path, &sweep_csv(&result, weights))?;
            let json_path = args.out.join(format!("{stem}.json"));
            write_atomic(&json_path, &chosen_json(curve.id(), kind.name(), &result)?)?;
            println!(
                "{} {kind}: best {} (stop {}{}, objective {:.2})",
                curve.id(),
                result.best,
                result.outcome.stop_epoch,
                if result.outcome.out_of_range {
                    ", out-of-range"
                } else {
                    ""
                },
                result.objective
            );
        }
    }
    Ok(())
}
