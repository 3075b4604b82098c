use stoprule_core::evaluate_trace_with;

use crate::cli::EvalArgs;
use crate::error::{CliError, Result};
use crate::load::load_curve_path;
use crate::output::{sanitize, trace_csv, write_atomic};
use crate::spec::{parse_indicator, parse_pool, IndicatorSpec, SpecContext};

pub fn run(args: EvalArgs) -> Result<()> {
    let mut ctx = SpecContext {
        strip_k: args.indicators.strip_k,
        coefficient: args.indicators.coef.into(),
        ..SpecContext::default()
    };
    if let Some(pool) = &args.indicators.pool {
        ctx.pool = parse_pool(pool, ctx.strip_k)?;
    }
    let mode = args.indicators.mode();

    let mut configs = Vec::new();
    for spec in &args.indicators.indicators {
        match parse_indicator(spec, &ctx)? {
            IndicatorSpec::Fixed(config) => configs.push(config),
            IndicatorSpec::Tuned(_) => {
                return Err(CliError::input(format!(
                    "{spec:?}: tuned markers need a baseline; use the frame or tune command"
                )))
            }
        }
    }

    for path in &args.input.curves {
        let curve = load_curve_path(path, args.input.format)?;
        for config in &configs {
            let trace = evaluate_trace_with(&curve, config, mode)?;
            let name = format!(
                "trace_{}_{}.csv",
                sanitize(curve.id()),
                sanitize(&config.to_string().replace(':', "-"))
            );
            let out_path = args.out.join(name);
            write_atomic(&out_path, &trace_csv(&trace))?;
            println!("wrote {}", out_path.display());
        }
    }
    Ok(())
}
