use crate::cli::IngestArgs;
use crate::error::{CliError, Result};
use crate::load::load_curve_path;

pub fn run(args: IngestArgs) -> Result<()> {
    let mut failures = 0usize;
    for path in &args.input.curves {
        match load_curve_path(path, args.input.format) {
            Ok(curve) => {
                println!(
                    "ok {}: {} epochs (id {})",
                    path.display(),
                    curve.len(),
                    curve.id()
                );
            }
            Err(e) => {
                failures += 1;
                println!("error {e}");
            }
        }
    }
    if failures > 0 {
        return Err(CliError::input(format!(
            "{failures} of {} curve files failed validation",
            args.input.curves.len()
        )));
    }
    Ok(())
}
