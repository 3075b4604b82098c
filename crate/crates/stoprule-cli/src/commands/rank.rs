use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::PathBuf;

use crate::cli::RankArgs;
use crate::error::{CliError, Result};
use crate::output::{parse_frame_csv, write_atomic, SavedRun};

/// Bucket of a run within its frame: its rank position when the indicator
/// stopped the run itself, or the out-of-range bucket when the primary
/// rule did. Out-of-range runs never count toward a rank position, so they
/// are excluded from any "best" designation by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Bucket {
    Rank(usize),
    OutOfRange,
}

impl std::fmt::Display for Bucket {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Bucket::Rank(r) => write!(f, "{r}"),
            Bucket::OutOfRange => f.write_str("oor"),
        }
    }
}

pub fn run(args: RankArgs) -> Result<()> {
    let mut files: Vec<PathBuf> = if args.files.is_empty() {
        let mut found = Vec::new();
        for entry in fs::read_dir(&args.out)
            .map_err(|e| CliError::input(format!("{}: {e}", args.out.display())))?
        {
            let path = entry?.path();
            let name = path.file_name().and_then(|n| n.to_str()).unwrap_or("");
            if name.starts_with("frame_") && name.ends_with(".csv") {
                found.push(path);
            }
        }
        found
    } else {
        args.files.clone()
    };
    files.sort();
    if files.is_empty() {
        return Err(CliError::input(format!(
            "no frame reports found under {}",
            args.out.display()
        )));
    }

    let mut counts: BTreeMap<(String, Bucket), usize> = BTreeMap::new();
    let mut totals: BTreeMap<String, usize> = BTreeMap::new();
    for path in &files {
        let content = fs::read_to_string(path)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        for SavedRun {
            family,
            rank,
            out_of_range,
        } in parse_frame_csv(&content, path)?
        {
            let bucket = if out_of_range {
                Bucket::OutOfRange
            } else {
                Bucket::Rank(rank)
            };
            *counts.entry((family.clone(), bucket)).or_default() += 1;
            *totals.entry(family).or_default() += 1;
        }
    }

    let mut csv = String::from("indicator,bucket,count,percent\n");
    for ((family, bucket), count) in &counts {
        let percent = 100.0 * *count as f64 / totals[family] as f64;
        let _ = writeln!(csv, "{family},{bucket},{count},{percent}");
    }
    let out_path = args.out.join("rank.csv");
    write_atomic(&out_path, &csv)?;

    println!("ranked {} frame reports", files.len());
    for (family, total) in &totals {
        let best = counts
            .get(&(family.clone(), Bucket::Rank(1)))
            .copied()
            .unwrap_or(0);
        let oor = counts
            .get(&(family.clone(), Bucket::OutOfRange))
            .copied()
            .unwrap_or(0);
        println!(
            "  {family:<6} best {:>6.2}%  out-of-range {:>6.2}%  ({total} runs)",
            100.0 * best as f64 / *total as f64,
            100.0 * oor as f64 / *total as f64
        );
    }
    println!("wrote {}", out_path.display());
    Ok(())
}
