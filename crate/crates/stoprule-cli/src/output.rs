//! Deterministic file output: CSV/JSON formatting helpers and atomic
//! writes. Machine formats print full precision (shortest round-trip);
//! human-readable tables print two decimals.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use stoprule_core::{stats, ErrorCurve, FrameReport, IndicatorTrace, TuneResult, Weights};

use crate::error::{CliError, Result};

/// Full-precision float formatting (round-trips through parse).
pub fn fmt_num(v: f64) -> String {
    format!("{v}")
}

/// Replace filesystem-hostile characters so ids can name files.
pub fn sanitize(id: &str) -> String {
    id.chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '-' | '_' | '.') {
                c
            } else {
                '_'
            }
        })
        .collect()
}

/// Write through a temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, content: &str) -> Result<()> {
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let file_name = path
        .file_name()
        .and_then(|n| n.to_str())
        .ok_or_else(|| CliError::input(format!("bad output path {}", path.display())))?;
    let tmp: PathBuf = dir.join(format!(".tmp-{file_name}"));
    fs::write(&tmp, content)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

/// Trace export: epoch,value,defined,fires with undefined values left empty.
pub fn trace_csv(trace: &IndicatorTrace) -> String {
    let mut out = String::from("epoch,value,defined,fires\n");
    for e in 1..=trace.len() {
        let (value, defined) = match trace.value(e) {
            Some(v) => (fmt_num(v), true),
            None => (String::new(), false),
        };
        let _ = writeln!(out, "{e},{value},{defined},{}", trace.fires(e));
    }
    out
}

/// Frame export: the oracle baseline first (rank empty), then every run in
/// rank order.
pub fn frame_csv(report: &FrameReport) -> String {
    let mut out = String::from("indicator,params,stop_epoch,out_of_range,cost,phi,rank\n");
    let _ = writeln!(
        out,
        "oracle,{},{},false,{},0,",
        report.horizon,
        report.baseline_stop,
        fmt_num(report.baseline_cost)
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            row.indicator.name(),
            row.indicator.params_string(),
            row.stop_epoch,
            row.out_of_range,
            fmt_num(row.cost),
            fmt_num(row.phi),
            row.rank
        );
    }
    out
}

/// Two-decimal stdout table for one frame.
pub fn frame_table(report: &FrameReport) -> String {
    let mut out = String::new();
    let _ = writeln!(
        out,
        "frame {}  horizon {}  baseline stop {}  mcdb {:.2}  phi mean {:.2} var {:.2}",
        report.kernel_id,
        report.horizon,
        report.baseline_stop,
        report.mcdb,
        report.phi_mean,
        report.phi_variance
    );
    let _ = writeln!(
        out,
        "  {:>4}  {:<16} {:>6}  {:>3}  {:>6}",
        "rank", "indicator", "stop", "oor", "phi"
    );
    for row in &report.rows {
        let _ = writeln!(
            out,
            "  {:>4}  {:<16} {:>6}  {:>3}  {:>6.2}",
            row.rank,
            row.indicator.to_string(),
            row.stop_epoch,
            if row.out_of_range { "yes" } else { "" },
            row.phi
        );
    }
    out
}

#[derive(Serialize)]
struct WeightsOut {
    mi: f64,
    ea: f64,
}

#[derive(Serialize)]
struct FamilyAggregate {
    runs: usize,
    out_of_range: usize,
    mean: f64,
    variance: f64,
    min: f64,
    q1: f64,
    median: f64,
    q3: f64,
    max: f64,
}

#[derive(Serialize)]
struct AggregateOut {
    horizon: usize,
    weights: WeightsOut,
    frames: Vec<String>,
    indicators: BTreeMap<String, FamilyAggregate>,
}

/// Cross-frame aggregation of phi per indicator family: mean, population
/// variance, and the five-number summary behind the box plots.
/// Out-of-range runs are included, as the tables score them too.
pub fn aggregate_json(reports: &[&FrameReport], horizon: usize, w: Weights) -> Result<String> {
    let mut phis: BTreeMap<String, Vec<f64>> = BTreeMap::new();
    let mut oor: BTreeMap<String, usize> = BTreeMap::new();
    for report in reports {
        for row in &report.rows {
            let family = row.indicator.name().to_string();
            phis.entry(family.clone()).or_default().push(row.phi);
            *oor.entry(family).or_default() += row.out_of_range as usize;
        }
    }
    let mut indicators = BTreeMap::new();
    for (family, values) in phis {
        let summary = stats::five_number_summary(&values)
            .ok_or_else(|| CliError::internal("empty phi sample for a reported family"))?;
        indicators.insert(
            family.clone(),
            FamilyAggregate {
                runs: values.len(),
                out_of_range: oor[&family],
                mean: stats::mean(&values).unwrap_or(0.0),
                variance: stats::variance(&values).unwrap_or(0.0),
                min: summary.min,
                q1: summary.q1,
                median: summary.median,
                q3: summary.q3,
                max: summary.max,
            },
        );
    }
    let doc = AggregateOut {
        horizon,
        weights: WeightsOut {
            mi: w.mi(),
            ea: w.ea(),
        },
        frames: reports.iter().map(|r| r.kernel_id.clone()).collect(),
        indicators,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::internal(format!("aggregate serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// One parsed row of a saved frame CSV (the rank command's input).
#[derive(Debug, Clone, PartialEq)]
pub struct SavedRun {
    pub family: String,
    pub rank: usize,
    pub out_of_range: bool,
}

/// Read the runs back out of a frame CSV, skipping the oracle row.
pub fn parse_frame_csv(content: &str, source: &Path) -> Result<Vec<SavedRun>> {
    let mut runs = Vec::new();
    for (i, line) in content.lines().enumerate() {
        if i == 0 || line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').collect();
        if fields.len() != 7 {
            return Err(CliError::input(format!(
                "{}: row {}: expected 7 fields, found {}",
                source.display(),
                i + 1,
                fields.len()
            )));
        }
        if fields[0] == "oracle" {
            continue;
        }
        let parse_err = |what: &str| {
            CliError::input(format!(
                "{}: row {}: bad {what} {:?}",
                source.display(),
                i + 1,
                line
            ))
        };
        runs.push(SavedRun {
            family: fields[0].to_string(),
            rank: fields[6].parse().map_err(|_| parse_err("rank"))?,
            out_of_range: fields[3]
                .parse()
                .map_err(|_| parse_err("out_of_range flag"))?,
        });
    }
    Ok(runs)
}

/// Tune sweep export.
pub fn sweep_csv(result: &TuneResult, w: Weights) -> String {
    let mut out =
        String::from("indicator,params,stop_epoch,out_of_range,cost,objective,signed_deviation\n");
    for entry in &result.sweep {
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{}",
            entry.config.name(),
            entry.config.params_string(),
            entry.outcome.stop_epoch,
            entry.outcome.out_of_range,
            fmt_num(stoprule_core::run_cost(&entry.outcome, w)),
            fmt_num(entry.objective),
            fmt_num(entry.signed_deviation)
        );
    }
    out
}

#[derive(Serialize)]
struct ChosenOut {
    curve: String,
    kind: String,
    best: String,
    stop_epoch: usize,
    out_of_range: bool,
    objective: f64,
}

/// The chosen configuration of one tuning sweep, as JSON.
pub fn chosen_json(curve_id: &str, kind: &str, result: &TuneResult) -> Result<String> {
    let doc = ChosenOut {
        curve: curve_id.to_string(),
        kind: kind.to_string(),
        best: result.best.to_string(),
        stop_epoch: result.outcome.stop_epoch,
        out_of_range: result.outcome.out_of_range,
        objective: result.objective,
    };
    let mut text = serde_json::to_string_pretty(&doc)
        .map_err(|e| CliError::internal(format!("chosen-config serialization: {e}")))?;
    text.push('\n');
    Ok(text)
}

/// Curve export in the ingestion formats.
pub fn curve_csv(curve: &ErrorCurve) -> String {
    let mut out = String::from("epoch,train_error,val_error\n");
    for e in 1..=curve.len() {
        let _ = writeln!(
            out,
            "{e},{},{}",
            fmt_num(curve.train_error(e)),
            fmt_num(curve.val_error(e))
        );
    }
    out
}

pub fn curve_jsonl(curve: &ErrorCurve) -> String {
    #[derive(Serialize)]
    struct Row {
        epoch: usize,
        train_error: f64,
        val_error: f64,
    }
    let mut out = String::new();
    for e in 1..=curve.len() {
        let row = Row {
            epoch: e,
            train_error: curve.train_error(e),
            val_error: curve.val_error(e),
        };
        let _ = writeln!(
            out,
            "{}",
            serde_json::to_string(&row).expect("plain struct")
        );
    }
    out
}

/// Sanity gate run on every frame report before it is written: the metric
/// invariants hold by construction, so a violation is an internal error.
pub fn check_report_invariants(report: &FrameReport) -> Result<()> {
    for (i, row) in report.rows.iter().enumerate() {
        if !(-1.0..=1.0).contains(&row.phi) || !row.phi.is_finite() {
            return Err(CliError::internal(format!(
                "phi {} outside [-1, 1] for {}",
                row.phi, row.indicator
            )));
        }
        if row.rank != i + 1 {
            return Err(CliError::internal("ranks are not a 1..n permutation"));
        }
    }
    Ok(())
}
