//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use stoprule_core::{Coefficient, EvalMode};

use crate::load::Format;

#[derive(Debug, Parser)]
#[command(
    name = "stoprule",
    version,
    about = "Early-stopping indicator evaluation over epoch-indexed error curves"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Validate curve files and report per-file status
    Ingest(IngestArgs),
    /// Export per-epoch criterion values and firing series per indicator
    Eval(EvalArgs),
    /// Score indicators against the oracle baseline, one frame per curve
    Frame(FrameArgs),
    /// Sweep the published parameter grids and pick the best setting
    Tune(TuneArgs),
    /// Summarize rank positions across saved frame reports
    Rank(RankArgs),
    /// Generate deterministic synthetic curves
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoefArg {
    Pearson,
    Spearman,
}

impl From<CoefArg> for Coefficient {
    fn from(c: CoefArg) -> Self {
        match c {
            CoefArg::Pearson => Coefficient::Pearson,
            CoefArg::Spearman => Coefficient::Spearman,
        }
    }
}

#[derive(Debug, Args)]
pub struct InputOpts {
    /// Curve files (.csv or .jsonl)
    #[arg(required = true, value_name = "CURVE")]
    pub curves: Vec<PathBuf>,
    /// Force the input format instead of inferring it from the extension
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Debug, Args)]
pub struct IndicatorOpts {
    /// Indicator spec, repeatable: e.g. gl:1.0, p:5:1.0, up:5:5, mne:10,
    /// coi:5:0.7, or FAMILY:tuned
    #[arg(long = "indicator", required = true, value_name = "SPEC")]
    pub indicators: Vec<String>,
    /// COI pool: comma-separated indicator specs
    /// (default gl:1.0,p:5:1.0,pq:5:1.0,up:5:5,hnr:5:5.0,og:0.5)
    #[arg(long, value_name = "SPECS")]
    pub pool: Option<String>,
    /// Default strip length for specs that omit k
    #[arg(long = "strip-k", default_value_t = 5, value_name = "K")]
    pub strip_k: usize,
    /// Correlation coefficient for COI
    #[arg(long, value_enum, default_value = "pearson")]
    pub coef: CoefArg,
    /// Evaluate strip rules at every epoch instead of strip boundaries only
    #[arg(long = "every-epoch")]
    pub every_epoch: bool,
}

impl IndicatorOpts {
    pub fn mode(&self) -> EvalMode {
        if self.every_epoch {
            EvalMode::EveryEpoch
        } else {
            EvalMode::StripAligned
        }
    }
}

#[derive(Debug, Args)]
pub struct CostOpts {
    /// Oracle horizon in epochs
    #[arg(long, default_value_t = 1000)]
    pub horizon: usize,
    /// Model-induction cost weight, in (0, 1]
    #[arg(long = "w-mi", default_value_t = 0.5)]
    pub w_mi: f64,
    /// Error-acquisition cost weight, in (0, 1]
    #[arg(long = "w-ea", default_value_t = 0.5)]
    pub w_ea: f64,
}

#[derive(Debug, Args)]
pub struct IngestArgs {
    #[command(flatten)]
    pub input: InputOpts,
}

#[derive(Debug, Args)]
pub struct EvalArgs {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub indicators: IndicatorOpts,
    /// Output directory for trace files
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct FrameArgs {
    #[command(flatten)]
    pub input: InputOpts,
    #[command(flatten)]
    pub indicators: IndicatorOpts,
    #[command(flatten)]
    pub cost: CostOpts,
    /// Output directory for frame reports and the aggregate
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
    /// Parallel frame evaluations (default: one per CPU)
    #[arg(long, value_name = "N")]
    pub jobs: Option<usize>,
}

#[derive(Debug, Args)]
pub struct TuneArgs {
    #[command(flatten)]
    pub input: InputOpts,
    /// Family to tune, repeatable: mne, gl, p, pq, up, hnr, og, coi, or all
    #[arg(long = "indicator", required = true, value_name = "FAMILY")]
    pub kinds: Vec<String>,
    /// COI pool: comma-separated indicator specs
    #[arg(long, value_name = "SPECS")]
    pub pool: Option<String>,
    /// Default strip length when parsing pool specs
    #[arg(long = "strip-k", default_value_t = 5, value_name = "K")]
    pub strip_k: usize,
    /// Correlation coefficient for COI
    #[arg(long, value_enum, default_value = "pearson")]
    pub coef: CoefArg,
    /// Evaluate strip rules at every epoch instead of strip boundaries only
    #[arg(long = "every-epoch")]
    pub every_epoch: bool,
    #[command(flatten)]
    pub cost: CostOpts,
    /// Output directory for sweep tables and chosen configs
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct RankArgs {
    /// Frame report CSVs; defaults to the frame_*.csv files under --out
    #[arg(value_name = "REPORT")]
    pub files: Vec<PathBuf>,
    /// Directory holding frame reports; rank.csv is written here
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// Curve id (and file stem)
    #[arg(long, default_value = "synth")]
    pub id: String,
    /// Number of epochs
    #[arg(long, default_value_t = 1000)]
    pub epochs: usize,
    #[arg(long = "train-init", default_value_t = 90.0)]
    pub train_init: f64,
    #[arg(long = "train-floor", default_value_t = 5.0)]
    pub train_floor: f64,
    /// Training-error decay rate (> 0)
    #[arg(long = "lambda-train", default_value_t = 0.05)]
    pub lambda_train: f64,
    #[arg(long = "val-init", default_value_t = 90.0)]
    pub val_init: f64,
    #[arg(long = "val-floor", default_value_t = 10.0)]
    pub val_floor: f64,
    /// Validation-error decay rate (> 0)
    #[arg(long = "lambda-val", default_value_t = 0.04)]
    pub lambda_val: f64,
    /// Epoch at which the overfit ramp starts
    #[arg(long, default_value_t = 100)]
    pub onset: usize,
    /// Overfit ramp slope per epoch past the onset (>= 0)
    #[arg(long, default_value_t = 0.02)]
    pub ramp: f64,
    /// Uniform noise amplitude (>= 0)
    #[arg(long = "noise-amp", default_value_t = 0.5)]
    pub noise_amp: f64,
    /// Seed of the deterministic noise stream
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Number of curves; curve i uses seed + i and the id suffixed -NNN
    #[arg(long, default_value_t = 1)]
    pub count: usize,
    /// Output format
    #[arg(long, value_enum, default_value = "csv")]
    pub format: Format,
    /// Output directory
    #[arg(long, default_value = "out")]
    pub out: PathBuf,
}
