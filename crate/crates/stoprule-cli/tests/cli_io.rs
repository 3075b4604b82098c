//! Integration tests for the command-line surface: exit codes, file
//! formats, and agreement between in-process results and reloaded reports.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use stoprule_core::{frame_report, EvalMode, Frame, IndicatorConfig, Weights};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_stoprule")
}

fn run_in(dir: &Path, args: &[&str]) -> Output {
    Command::new(bin())
        .args(args)
        .current_dir(dir)
        .output()
        .expect("spawn stoprule")
}

fn stdout(output: &Output) -> String {
    String::from_utf8_lossy(&output.stdout).into_owned()
}

#[test]
fn ingest_exit_codes_and_diagnostics() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::write(
        root.join("good.csv"),
        "epoch,train_error,val_error\n1,50,52\n2,40,45\n3,35,44\n",
    )
    .unwrap();
    fs::write(root.join("negative.csv"), "1,50,52\n2,40,-1\n").unwrap();
    fs::write(root.join("gap.csv"), "1,50,52\n3,35,44\n").unwrap();
    fs::write(root.join("empty.csv"), "").unwrap();

    let ok = run_in(root, &["ingest", "good.csv"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("ok good.csv: 3 epochs"));

    let neg = run_in(root, &["ingest", "negative.csv"]);
    assert_eq!(neg.status.code(), Some(1));
    assert!(stdout(&neg).contains("row 2"), "{}", stdout(&neg));
    assert!(stdout(&neg).contains("negative"), "{}", stdout(&neg));

    let gap = run_in(root, &["ingest", "gap.csv"]);
    assert_eq!(gap.status.code(), Some(1));
    assert!(stdout(&gap).contains("missing epoch 2"), "{}", stdout(&gap));

    let empty = run_in(root, &["ingest", "empty.csv"]);
    assert_eq!(empty.status.code(), Some(1));

    // One bad file fails the batch but every file is still reported.
    let both = run_in(root, &["ingest", "good.csv", "negative.csv"]);
    assert_eq!(both.status.code(), Some(1));
    assert!(stdout(&both).contains("ok good.csv"));

    // Usage errors are input errors.
    let usage = run_in(root, &["frame", "good.csv"]);
    assert_eq!(usage.status.code(), Some(1));
}

#[test]
fn frame_phi_matches_hand_substitution() {
    // Baseline: earliest minimum at epoch 4 (val 2), C_B = 0.5*4 + 0.5*2 = 3.
    // mne:5 stops at 5 (val 10): C = 7.5, deviation 4.5.
    // mne:6 stops at 6 (val 10): C = 8.0, deviation 5.0 = MCDB.
    // Hand substitution of the metric: phi = (C - C_B + MCDB)/MCDB - 1,
    // so phi(mne:5) = 0.9 and phi(mne:6) = 1.0.
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    fs::write(
        root.join("hand.csv"),
        "1,9,5\n2,8,4\n3,7,3\n4,6,2\n5,5,10\n6,4,10\n",
    )
    .unwrap();
    let out = run_in(
        root,
        &[
            "frame",
            "hand.csv",
            "--indicator",
            "mne:5",
            "--indicator",
            "mne:6",
            "--horizon",
            "6",
            "--out",
            "r",
        ],
    );
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let report = fs::read_to_string(root.join("r/frame_hand.csv")).unwrap();
    let lines: Vec<&str> = report.lines().collect();
    assert_eq!(
        lines[0],
        "indicator,params,stop_epoch,out_of_range,cost,phi,rank"
    );
    assert_eq!(lines[1], "oracle,6,4,false,3,0,");
    // The published form of the metric is (C - C_B + MCDB)/MCDB - 1, so the
    // stored phi may differ from the hand value in the last ulp.
    let check = |line: &str, prefix: &str, cost: f64, phi: f64, rank: &str| {
        let fields: Vec<&str> = line.split(',').collect();
        assert_eq!(
            format!("{},{},{},{}", fields[0], fields[1], fields[2], fields[3]),
            prefix
        );
        assert_eq!(fields[4].parse::<f64>().unwrap(), cost);
        assert!((fields[5].parse::<f64>().unwrap() - phi).abs() <= 1e-12);
        assert_eq!(fields[6], rank);
    };
    check(lines[2], "mne,5,5,false", 7.5, 0.9, "1");
    check(lines[3], "mne,6,6,false", 8.0, 1.0, "2");
}

#[test]
fn frame_flags_out_of_range_runs() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    // Monotone-decreasing validation error: gl never fires.
    let mut csv = String::new();
    for e in 1..=40 {
        csv.push_str(&format!("{e},{},{}\n", 50 - e, 60 - e));
    }
    fs::write(root.join("mono.csv"), csv).unwrap();
    let out = run_in(
        root,
        &[
            "frame",
            "mono.csv",
            "--indicator",
            "gl:1.0",
            "--horizon",
            "40",
            "--out",
            "r",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let report = fs::read_to_string(root.join("r/frame_mono.csv")).unwrap();
    let gl_row: Vec<&str> = report
        .lines()
        .find(|l| l.starts_with("gl,"))
        .unwrap()
        .split(',')
        .collect();
    assert_eq!(gl_row[2], "40", "stop at the horizon");
    assert_eq!(gl_row[3], "true", "flagged out-of-range");
}

#[test]
fn frame_errors_are_per_frame() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth", "--id", "long", "--epochs", "100", "--onset", "30", "--seed", "3", "--out",
            ".",
        ],
    );
    run_in(
        root,
        &[
            "synth", "--id", "short", "--epochs", "50", "--onset", "30", "--seed", "4", "--out",
            ".",
        ],
    );
    let out = run_in(
        root,
        &[
            "frame",
            "long.csv",
            "short.csv",
            "--indicator",
            "og:0.5",
            "--horizon",
            "100",
            "--out",
            "r",
        ],
    );
    // The short curve cannot host a 100-epoch frame; the long one still can.
    assert_eq!(out.status.code(), Some(1));
    assert!(root.join("r/frame_long.csv").exists());
    assert!(!root.join("r/frame_short.csv").exists());
    assert!(
        stdout(&out).contains("frame short failed"),
        "{}",
        stdout(&out)
    );
    assert!(root.join("r/aggregate.json").exists());
}

#[test]
fn rank_single_and_double_frame_percentages() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth", "--id", "c", "--count", "2", "--epochs", "120", "--onset", "40", "--seed",
            "9", "--out", ".",
        ],
    );
    let out = run_in(
        root,
        &[
            "frame",
            "c-000.csv",
            "c-001.csv",
            "--indicator",
            "mne:40",
            "--horizon",
            "120",
            "--out",
            "r",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    // Single indicator: rank 1 in both frames, so 100% at rank 1.
    let rank = run_in(root, &["rank", "--out", "r"]);
    assert_eq!(rank.status.code(), Some(0));
    let csv = fs::read_to_string(root.join("r/rank.csv")).unwrap();
    assert_eq!(csv.lines().nth(1).unwrap(), "mne,1,2,100");
}

#[test]
fn rank_percentages_partition_per_family() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth",
            "--id",
            "b",
            "--count",
            "6",
            "--epochs",
            "200",
            "--onset",
            "60",
            "--ramp",
            "0.04",
            "--noise-amp",
            "1.5",
            "--seed",
            "21",
            "--out",
            ".",
        ],
    );
    let mut args = vec!["frame"];
    let files: Vec<String> = (0..6).map(|i| format!("b-{i:03}.csv")).collect();
    args.extend(files.iter().map(|s| s.as_str()));
    args.extend([
        "--indicator",
        "gl:1.0",
        "--indicator",
        "og:0.5",
        "--indicator",
        "up:5:5",
        "--indicator",
        "coi:5:0.7",
        "--horizon",
        "200",
        "--out",
        "r",
    ]);
    assert_eq!(run_in(root, &args).status.code(), Some(0));
    assert_eq!(run_in(root, &["rank", "--out", "r"]).status.code(), Some(0));

    let csv = fs::read_to_string(root.join("r/rank.csv")).unwrap();
    let mut sums: std::collections::BTreeMap<String, f64> = Default::default();
    for line in csv.lines().skip(1) {
        let fields: Vec<&str> = line.split(',').collect();
        *sums.entry(fields[0].to_string()).or_default() += fields[3].parse::<f64>().unwrap();
    }
    assert_eq!(sums.len(), 4);
    for (family, sum) in sums {
        assert!(
            (sum - 100.0).abs() < 1e-9,
            "{family} percentages sum to {sum}"
        );
    }
}

#[test]
fn saved_reports_agree_with_in_process_ranking() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth",
            "--id",
            "rt",
            "--count",
            "3",
            "--epochs",
            "150",
            "--onset",
            "50",
            "--ramp",
            "0.05",
            "--noise-amp",
            "1.0",
            "--seed",
            "33",
            "--out",
            ".",
        ],
    );
    let out = run_in(
        root,
        &[
            "frame",
            "rt-000.csv",
            "rt-001.csv",
            "rt-002.csv",
            "--indicator",
            "gl:1.0",
            "--indicator",
            "og:0.5",
            "--indicator",
            "mne:50",
            "--horizon",
            "150",
            "--out",
            "r",
        ],
    );
    assert_eq!(out.status.code(), Some(0));

    for i in 0..3 {
        // Reload the curve and rebuild the frame in process.
        let curve = stoprule_cli::load::load_curve_path(&root.join(format!("rt-{i:03}.csv")), None)
            .unwrap();
        let configs = [
            IndicatorConfig::Gl { alpha: 1.0 },
            IndicatorConfig::Og { alpha: 0.5 },
            IndicatorConfig::Mne { m: 50 },
        ];
        let frame = Frame::build(
            curve.id(),
            curve.clone(),
            150,
            &configs,
            EvalMode::StripAligned,
        )
        .unwrap();
        let report = frame_report(&frame, Weights::default());

        let saved = fs::read_to_string(root.join(format!("r/frame_rt-{i:03}.csv"))).unwrap();
        let saved_rows: Vec<Vec<String>> = saved
            .lines()
            .skip(2) // header + oracle
            .map(|l| l.split(',').map(str::to_string).collect())
            .collect();
        assert_eq!(saved_rows.len(), report.rows.len());
        for (saved, row) in saved_rows.iter().zip(&report.rows) {
            assert_eq!(saved[0], row.indicator.name());
            assert_eq!(saved[2], row.stop_epoch.to_string());
            assert_eq!(saved[5].parse::<f64>().unwrap(), row.phi);
            assert_eq!(saved[6].parse::<usize>().unwrap(), row.rank);
        }
    }
}

#[test]
fn aggregate_quartiles_match_independent_recomputation() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth",
            "--id",
            "q",
            "--count",
            "15",
            "--epochs",
            "200",
            "--onset",
            "70",
            "--ramp",
            "0.03",
            "--noise-amp",
            "1.0",
            "--seed",
            "5",
            "--out",
            ".",
        ],
    );
    let files: Vec<String> = (0..15).map(|i| format!("q-{i:03}.csv")).collect();
    let mut args = vec!["frame"];
    args.extend(files.iter().map(|s| s.as_str()));
    args.extend([
        "--indicator",
        "gl:1.0",
        "--indicator",
        "og:0.5",
        "--indicator",
        "up:5:5",
        "--horizon",
        "200",
        "--out",
        "r",
    ]);
    assert_eq!(run_in(root, &args).status.code(), Some(0));

    // Independent route: collect phi per family from the per-frame CSVs and
    // recompute the order statistics by sorting.
    let mut phis: std::collections::BTreeMap<String, Vec<f64>> = Default::default();
    for file in &files {
        let name = format!("r/frame_{}.csv", file.trim_end_matches(".csv"));
        let content = fs::read_to_string(root.join(name)).unwrap();
        for line in content.lines().skip(1) {
            let fields: Vec<&str> = line.split(',').collect();
            if fields[0] == "oracle" {
                continue;
            }
            phis.entry(fields[0].to_string())
                .or_default()
                .push(fields[5].parse().unwrap());
        }
    }
    let naive_quantile = |sorted: &[f64], p: f64| -> f64 {
        let h = (sorted.len() - 1) as f64 * p;
        let lo = h.floor() as usize;
        let hi = h.ceil() as usize;
        sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
    };

    let aggregate: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(root.join("r/aggregate.json")).unwrap()).unwrap();
    for (family, mut values) in phis {
        values.sort_by(f64::total_cmp);
        let entry = &aggregate["indicators"][&family];
        assert_eq!(entry["runs"].as_u64().unwrap() as usize, values.len());
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        assert!((entry["mean"].as_f64().unwrap() - mean).abs() < 1e-12);
        let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / values.len() as f64;
        assert!((entry["variance"].as_f64().unwrap() - var).abs() < 1e-12);
        for (key, p) in [
            ("min", 0.0),
            ("q1", 0.25),
            ("median", 0.5),
            ("q3", 0.75),
            ("max", 1.0),
        ] {
            let expected = naive_quantile(&values, p);
            let got = entry[key].as_f64().unwrap();
            assert!(
                (got - expected).abs() < 1e-12,
                "{family} {key}: {got} vs {expected}"
            );
        }
    }
}

#[test]
fn eval_traces_and_synth_formats_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let root = dir.path();
    run_in(
        root,
        &[
            "synth", "--id", "j", "--epochs", "60", "--onset", "20", "--seed", "2", "--format",
            "jsonl", "--out", ".",
        ],
    );
    assert_eq!(
        run_in(root, &["ingest", "j.jsonl"]).status.code(),
        Some(0),
        "jsonl output must re-ingest"
    );
    let out = run_in(
        root,
        &[
            "eval",
            "j.jsonl",
            "--indicator",
            "pq:5:1.0",
            "--indicator",
            "coi:5:0.7",
            "--out",
            "t",
        ],
    );
    assert_eq!(out.status.code(), Some(0));
    let trace = fs::read_to_string(root.join("t/trace_j_pq-5-1.0.csv")).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines[0], "epoch,value,defined,fires");
    assert_eq!(lines.len(), 61);
    // Warm-up epochs serialize with an empty value field.
    assert!(lines[1].starts_with("1,,false,false"));
    assert!(root.join("t/trace_j_coi-5-0.7.csv").exists());

    // The synth CSV format re-ingests too, and identical flags give
    // identical bytes.
    run_in(
        root,
        &[
            "synth", "--id", "k", "--epochs", "60", "--onset", "20", "--seed", "2", "--out", "a",
        ],
    );
    run_in(
        root,
        &[
            "synth", "--id", "k", "--epochs", "60", "--onset", "20", "--seed", "2", "--out", "b",
        ],
    );
    assert_eq!(
        fs::read(root.join("a/k.csv")).unwrap(),
        fs::read(root.join("b/k.csv")).unwrap()
    );
}
