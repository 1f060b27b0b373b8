use std::path::Path;
use std::process::{Command, Output};

use kbga_cli::BenchReport;

const WALLED: &str = r#"{
  "workspace": {"width": 100, "height": 100, "grid_cols": 50, "grid_rows": 50},
  "start": {"x": 50, "y": 10},
  "target": {"x": 50, "y": 90},
  "obstacles": [{"id": 0, "parts": [[[0, 45], [100, 45], [100, 55], [0, 55]]], "adjacency": []}]
}"#;

fn pathplan(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pathplan")).args(args).current_dir(dir).output().unwrap()
}

fn read(dir: &Path, name: &str) -> String {
    std::fs::read_to_string(dir.join(name)).unwrap()
}

fn value(report: &str, key: &str) -> String {
    report
        .lines()
        .find_map(|l| l.strip_prefix(&format!("{key}\t")))
        .unwrap_or_else(|| panic!("no {key} in\n{report}"))
        .to_string()
}

#[test]
fn plan_empty_world_is_straight() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathplan(&["plan", "--builtin", "empty", "--seed", "7", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let cost: f64 = value(&read(&dir.path().join("o"), "plan.tsv"), "cost").parse().unwrap();
    let straight = 80.0 * 2f64.sqrt();
    assert!(cost <= straight * 1.01, "{cost}");
}

#[test]
fn walled_off_target_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("walled.json"), WALLED).unwrap();
    let out = pathplan(&["plan", "walled.json", "--max-gens", "30", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(value(&read(&dir.path().join("o"), "plan.tsv"), "feasible"), "false");
}

#[test]
fn bad_inputs_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("broken.json"), "{\"workspace\": 3}").unwrap();
    for args in [
        &["plan", "missing.json"][..],
        &["plan", "broken.json"],
        &["plan", "--builtin", "nowhere"],
        &["plan", "--builtin", "empty", "--pop", "3"],
        &["simulate", "--builtin", "single-square"],
    ] {
        let out = pathplan(args, dir.path());
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(String::from_utf8_lossy(&out.stderr).starts_with("error: "), "{args:?}");
    }
}

#[test]
fn same_seed_same_report() {
    let dir = tempfile::tempdir().unwrap();
    for o in ["a", "b"] {
        let out = pathplan(&["plan", "--builtin", "single-square", "--seed", "11", "--svg", "--history", "--out", o], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    for f in ["plan.tsv", "path.tsv", "history.tsv", "plan.svg"] {
        assert_eq!(read(&dir.path().join("a"), f), read(&dir.path().join("b"), f), "{f}");
    }
}

#[test]
fn svg_is_well_formed_with_one_polyline_per_path() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathplan(&["plan", "--builtin", "zig-zag", "--seed", "1", "--svg", "--history", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let o = dir.path().join("o");
    let svg = read(&o, "plan.svg");
    let doc = roxmltree::Document::parse(&svg).unwrap();
    let root = doc.root_element();
    assert_eq!(root.tag_name().name(), "svg");
    assert_eq!(root.attribute("version"), Some("1.1"));
    let polylines = doc.descendants().filter(|n| n.has_tag_name("polyline")).count();
    // Every improvement of the best path is drawn, the last one as the final path.
    let improvements = read(&o, "history.tsv").lines().count() - 1;
    assert_eq!(polylines, improvements);
}

#[test]
fn bench_summary_recomputes_from_runs() {
    let dir = tempfile::tempdir().unwrap();
    let args = ["bench", "--builtin", "single-square", "--runs", "3", "--config", "ablation", "--max-gens", "40"];
    let out = pathplan(&[&args[..], &["--out", "o"]].concat(), dir.path());
    assert_eq!(out.status.code(), Some(0));
    let o = dir.path().join("o");
    let runs = BenchReport::parse_runs(&read(&o, "runs.tsv")).unwrap();
    assert_eq!(runs.len(), 9);
    assert_eq!(BenchReport::from_runs(runs).summary_tsv(), read(&o, "summary.tsv"));
    let again = pathplan(&[&args[..], &["--out", "p"]].concat(), dir.path());
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(read(&o, "runs.tsv"), read(&dir.path().join("p"), "runs.tsv"));
}

#[test]
fn export_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathplan(&["export", "closing-door", "--out", "door.json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let a = pathplan(&["simulate", "door.json", "--seed", "4", "--out", "a"], dir.path());
    let b = pathplan(&["simulate", "--builtin", "closing-door", "--seed", "4", "--out", "b"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(read(&dir.path().join("a"), "trajectory.tsv"), read(&dir.path().join("b"), "trajectory.tsv"));
}

#[test]
fn closing_door_renders_frames() {
    let dir = tempfile::tempdir().unwrap();
    let out = pathplan(&["simulate", "--builtin", "closing-door", "--seed", "1", "--out", "o"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let o = dir.path().join("o");
    let summary = read(&o, "summary.tsv");
    assert_eq!(value(&summary, "reached"), "true");
    assert_eq!(value(&summary, "collisions"), "0");
    let snapshots: usize = value(&summary, "snapshots").parse().unwrap();
    let frames = std::fs::read_dir(o.join("frames")).unwrap().count();
    assert_eq!(frames, snapshots);
    let last = read(&o.join("frames"), &format!("frame_{:03}.svg", snapshots - 1));
    let doc = roxmltree::Document::parse(&last).unwrap();
    // Past trajectory and current plan.
    assert_eq!(doc.descendants().filter(|n| n.has_tag_name("polyline")).count(), 2);
}

#[test]
fn faster_robot_arrives_earlier() {
    let dir = tempfile::tempdir().unwrap();
    let mut ends = Vec::new();
    for (speed, o) in [("2", "slow"), ("5", "fast")] {
        let out = pathplan(&["simulate", "--builtin", "closing-door", "--speed", speed, "--out", o], dir.path());
        assert_eq!(out.status.code(), Some(0), "speed {speed}");
        ends.push(value(&read(&dir.path().join(o), "summary.tsv"), "end_time").parse::<f64>().unwrap());
    }
    assert!(ends[1] < ends[0], "{ends:?}");
}

#[test]
fn shorter_update_interval_completes() {
    let dir = tempfile::tempdir().unwrap();
    for (interval, o) in [("1", "one"), ("2", "two")] {
        let out = pathplan(&["simulate", "--builtin", "closing-door", "--interval", interval, "--out", o], dir.path());
        assert!(matches!(out.status.code(), Some(0 | 2)), "interval {interval}");
        let summary = read(&dir.path().join(o), "summary.tsv");
        assert_eq!(value(&summary, "update_interval"), interval);
    }
}
