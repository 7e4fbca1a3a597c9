use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const BIN: &str = env!("CARGO_BIN_EXE_synthseg");
const FIXTURES: &str = concat!(env!("CARGO_MANIFEST_DIR"), "/../core/tests/fixtures");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).env_remove("SYNTHSEG_WORKERS").output().unwrap()
}

fn code(args: &[&str]) -> i32 {
    run(args).status.code().unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    for sub in ["generate", "config", "validate", "freq", "split", "sample", "eval-iou", "stats", "report"] {
        let out = run(&[sub, "--help"]);
        assert_eq!(out.status.code(), Some(0), "{sub}");
        assert!(String::from_utf8_lossy(&out.stdout).contains("--"), "{sub}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(code(&["generate", "--bogus"]), 1);
    assert_eq!(code(&[]), 1);
    assert_eq!(code(&["generate", "--count", "1"]), 1);
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&["generate", "--count", "0", "--out", p(dir.path())]), 1);
    assert_eq!(code(&["report", "--stats", "x.json", "--format", "pdf", "--out", p(dir.path())]), 1);
}

#[test]
fn data_errors_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("none.jsonl");
    let out = run(&["validate", "--manifest", p(&missing)]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("synthseg: "));
    let bad = dir.path().join("runs.jsonl");
    std::fs::write(&bad, "{\"r\": 3}\n").unwrap();
    assert_eq!(code(&["stats", "--runs", p(&bad), "--out", p(&dir.path().join("s.json"))]), 2);
}

#[test]
fn generate_validate_freq_split_sample() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    let args = ["generate", "--preset", "b", "--count", "4", "--seed", "3", "--width", "24", "--height", "20", "--out", p(&data)];
    assert_eq!(code(&args), 0);
    let manifest = data.join("manifest.jsonl");
    let out = run(&["validate", "--manifest", p(&manifest), "--verbose"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "ok: 4 frames, 32 masks");

    let table_json = dir.path().join("freq.json");
    let out = run(&["freq", "--manifest", p(&manifest), "--out", p(&table_json)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(String::from_utf8_lossy(&out.stdout).lines().count(), 10);
    let table: Value = serde_json::from_str(&std::fs::read_to_string(&table_json).unwrap()).unwrap();
    assert_eq!(table["total"], 4);
    assert_eq!(table["rows"].as_array().unwrap().len(), 8);

    let split = dir.path().join("split");
    assert_eq!(code(&["split", "--manifest", p(&manifest), "--fraction", "0.25", "--out", p(&split)]), 0);
    assert_eq!(code(&["validate", "--manifest", p(&split.join("holdout.jsonl"))]), 0);
    assert_eq!(code(&["validate", "--manifest", p(&split.join("train.jsonl"))]), 0);
    let lines = |f: &str| std::fs::read_to_string(split.join(f)).unwrap().lines().count();
    assert_eq!((lines("train.jsonl"), lines("holdout.jsonl")), (4, 2));

    let sub = dir.path().join("sub");
    assert_eq!(code(&["sample", "--manifest", p(&manifest), "--size", "2", "--out", p(&sub)]), 0);
    assert_eq!(code(&["validate", "--manifest", p(&sub.join("subset_2.jsonl"))]), 0);
    assert_eq!(code(&["sample", "--manifest", p(&manifest), "--size", "5", "--out", p(&sub)]), 2);
}

#[test]
fn eval_iou_scores_truth_as_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("data");
    assert_eq!(code(&["generate", "--count", "2", "--width", "16", "--height", "16", "--out", p(&data)]), 0);
    let report = dir.path().join("iou.json");
    let manifest = data.join("manifest.jsonl");
    assert_eq!(code(&["eval-iou", "--manifest", p(&manifest), "--predictions", p(&data), "--out", p(&report)]), 0);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(v["mean_iou"].as_f64(), Some(1.0), "{v}");
    assert_eq!(v["scored"], 2);
}

#[test]
fn stats_and_reports_from_fixture() {
    let dir = tempfile::tempdir().unwrap();
    let stats = dir.path().join("stats.json");
    assert_eq!(code(&["stats", "--runs", &format!("{FIXTURES}/figure_runs.jsonl"), "--out", p(&stats)]), 0);
    let got: Value = serde_json::from_str(&std::fs::read_to_string(&stats).unwrap()).unwrap();
    let want: Value = serde_json::from_str(&std::fs::read_to_string(format!("{FIXTURES}/figure_expected.json")).unwrap()).unwrap();
    let cells = got["cells"].as_array().unwrap();
    for e in want.as_array().unwrap() {
        let c = cells.iter().find(|c| c["r"] == e["r"] && c["s"] == e["s"]).unwrap();
        assert_eq!(c["mean"], e["mean"]);
        assert_eq!(c["percent_increase"], e["percent_increase"]);
        match (c["p_value"].as_f64(), e["p_value"].as_f64()) {
            (Some(a), Some(b)) => assert!((a - b).abs() < 1e-9),
            _ => assert!(c["p_value"].is_null() && e["p_value"].is_null()),
        }
    }
    let out = dir.path().join("reports");
    for format in ["csv", "json", "svg-heatmap", "svg-iqr"] {
        assert_eq!(code(&["report", "--stats", p(&stats), "--format", format, "--out", p(&out)]), 0, "{format}");
    }
    let names: Vec<String> = std::fs::read_dir(&out).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    assert_eq!(names.len(), 6, "{names:?}");
    let csv = std::fs::read_to_string(out.join("stats.csv")).unwrap();
    assert_eq!(csv.lines().count(), cells.len() + 1);
}

#[test]
fn config_roundtrips_through_generate() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("a.json");
    assert_eq!(code(&["config", "--preset", "a", "--out", p(&cfg)]), 0);
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(&cfg).unwrap()).unwrap();
    v["randomization"]["camera"]["width"] = 16.into();
    v["randomization"]["camera"]["height"] = 16.into();
    std::fs::write(&cfg, v.to_string()).unwrap();
    let (a, b) = (dir.path().join("x"), dir.path().join("y"));
    assert_eq!(code(&["generate", "--config", p(&cfg), "--count", "1", "--seed", "9", "--out", p(&a)]), 0);
    assert_eq!(code(&["generate", "--count", "1", "--seed", "9", "--width", "16", "--height", "16", "--out", p(&b)]), 0);
    assert_eq!(std::fs::read(a.join("frame_000000.png")).unwrap(), std::fs::read(b.join("frame_000000.png")).unwrap());
    assert_eq!(code(&["generate", "--config", p(&cfg), "--preset", "b", "--count", "1", "--out", p(&a)]), 1);
}
