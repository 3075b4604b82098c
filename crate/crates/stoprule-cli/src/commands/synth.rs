use stoprule_core::{generate, CurveModel};

use crate::cli::SynthArgs;
use crate::error::Result;
use crate::load::Format;
use crate::output::{curve_csv, curve_jsonl, sanitize, write_atomic};

pub fn run(args: SynthArgs) -> Result<()> {
    for i in 0..args.count {
        let model = CurveModel {
            n: args.epochs,
            train_init: args.train_init,
            train_floor: args.train_floor,
            lambda_train: args.lambda_train,
            val_init: args.val_init,
            val_floor: args.val_floor,
            lambda_val: args.lambda_val,
            onset: args.onset,
            ramp: args.ramp,
            noise_amp: args.noise_amp,
            seed: args.seed + i as u64,
        };
        let id = if args.count == 1 {
            args.id.clone()
        } else {
            format!("{}-{:03}", args.id, i)
        };
        let curve = generate(&model, id.clone())?;
        let (ext, content) = match args.format {
            Format::Csv => ("csv", curve_csv(&curve)),
            Format::Jsonl => ("jsonl", curve_jsonl(&curve)),
        };
        let path = args.out.join(format!("{}.{ext}", sanitize(&id)));
        write_atomic(&path, &content)?;
        println!("wrote {}", path.display());
    }
    Ok(())
}
