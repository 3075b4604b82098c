mod eval;
mod frame;
mod ingest;
mod rank;
mod synth;
mod tune;

use crate::cli::{Cli, Command};
use crate::error::Result;

pub fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Ingest(args) => ingest::run(args),
        Command::Eval(args) => eval::run(args),
        Command::Frame(args) => frame::run(args),
        Command::Tune(args) => tune::run(args),
        Command::Rank(args) => rank::run(args),
        Command::Synth(args) => synth::run(args),
    }
}
