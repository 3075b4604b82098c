//! Curve file ingestion: CSV and JSONL, with row-numbered diagnostics.
//!
//! CSV carries `epoch,train_error,val_error` columns with an optional
//! header; JSONL carries one object per line with the same keys. Rows must
//! arrive in epoch order starting at 1 so that duplicate and missing
//! epochs can be pinned to the row where contiguity breaks.

use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::Path;

use serde::Deserialize;
use stoprule_core::ErrorCurve;

use crate::error::{CliError, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Format {
    Csv,
    Jsonl,
}

/// Infer the format from the file extension.
pub fn detect_format(path: &Path) -> Result<Format> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("csv") => Ok(Format::Csv),
        Some("jsonl") | Some("ndjson") => Ok(Format::Jsonl),
        other => Err(CliError::input(format!(
            "{}: cannot infer format from extension {:?}; pass --format",
            path.display(),
            other.unwrap_or("")
        ))),
    }
}

/// Track that epochs arrive as 1, 2, 3, ... and name the offending row
/// otherwise.
struct EpochChecker {
    expected: usize,
}

impl EpochChecker {
    fn new() -> Self {
        Self { expected: 1 }
    }

    fn accept(&mut self, row: usize, epoch: i64) -> Result<()> {
        if epoch < 1 {
            return Err(CliError::input(format!(
                "row {row}: epoch {epoch} invalid; epochs start at 1"
            )));
        }
        let epoch = epoch as usize;
        if epoch < self.expected {
            return Err(CliError::input(format!(
                "row {row}: duplicate epoch {epoch} (already ingested)"
            )));
        }
        if epoch > self.expected {
            return Err(CliError::input(format!(
                "row {row}: missing epoch {} (found epoch {epoch})",
                self.expected
            )));
        }
        self.expected += 1;
        Ok(())
    }
}

fn check_value(row: usize, name: &str, v: f64) -> Result<f64> {
    if !v.is_finite() {
        return Err(CliError::input(format!("row {row}: {name} is not finite")));
    }
    if v < 0.0 {
        return Err(CliError::input(format!("row {row}: negative {name} ({v})")));
    }
    Ok(v)
}

fn parse_field(row: usize, name: &str, raw: &str) -> Result<f64> {
    let v: f64 = raw
        .trim()
        .parse()
        .map_err(|_| CliError::input(format!("row {row}: non-numeric {name} {raw:?}")))?;
    check_value(row, name, v)
}

fn load_csv<R: Read>(reader: R, id: &str) -> Result<ErrorCurve> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let mut checker = EpochChecker::new();
    let mut train = Vec::new();
    let mut val = Vec::new();
    let mut first = true;
    for record in rdr.records() {
        let record = record.map_err(|e| CliError::input(format!("malformed csv: {e}")))?;
        let row = record
            .position()
            .map(|p| p.line() as usize)
            .unwrap_or(train.len() + 1);
        if first {
            first = false;
            // Optional header row.
            if record
                .get(0)
                .is_some_and(|f| f.eq_ignore_ascii_case("epoch"))
            {
                continue;
            }
        }
        if record.len() != 3 {
            return Err(CliError::input(format!(
                "row {row}: expected 3 fields (epoch,train_error,val_error), found {}",
                record.len()
            )));
        }
        let epoch: i64 = record[0].parse().map_err(|_| {
            CliError::input(format!(
                "row {row}: epoch {:?} is not an integer",
                &record[0]
            ))
        })?;
        checker.accept(row, epoch)?;
        train.push(parse_field(row, "train_error", &record[1])?);
        val.push(parse_field(row, "val_error", &record[2])?);
    }
    ErrorCurve::new(id, train, val).map_err(|e| CliError::input(e.to_string()))
}

#[derive(Deserialize)]
struct JsonRow {
    epoch: i64,
    train_error: f64,
    val_error: f64,
}

fn load_jsonl<R: BufRead>(reader: R, id: &str) -> Result<ErrorCurve> {
    let mut checker = EpochChecker::new();
    let mut train = Vec::new();
    let mut val = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let row = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let parsed: JsonRow =
            serde_json::from_str(&line).map_err(|e| CliError::input(format!("row {row}: {e}")))?;
        checker.accept(row, parsed.epoch)?;
        train.push(check_value(row, "train_error", parsed.train_error)?);
        val.push(check_value(row, "val_error", parsed.val_error)?);
    }
    ErrorCurve::new(id, train, val).map_err(|e| CliError::input(e.to_string()))
}

/// Load and validate one curve from a reader.
pub fn load_curve<R: BufRead>(reader: R, format: Format, id: &str) -> Result<ErrorCurve> {
    match format {
        Format::Csv => load_csv(reader, id),
        Format::Jsonl => load_jsonl(reader, id),
    }
}

/// Load a curve file; the curve id is the file stem. Errors carry the path.
pub fn load_curve_path(path: &Path, format: Option<Format>) -> Result<ErrorCurve> {
    let format = match format {
        Some(f) => f,
        None => detect_format(path)?,
    };
    let id = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("curve")
        .to_string();
    let file = File::open(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
    load_curve(BufReader::new(file), format, &id)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}
