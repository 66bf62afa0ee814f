use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn horosvm(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_horosvm")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn bundled() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/multiclass_100.csv")
}

fn field(text: &str, key: &str) -> f64 {
    text.lines()
        .find_map(|l| l.strip_prefix(key).and_then(|r| r.trim().strip_prefix('=')))
        .unwrap_or_else(|| panic!("no {key} in {text}"))
        .trim()
        .parse()
        .unwrap()
}

#[test]
fn synth_defaults_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    assert!(horosvm(&["synth", "--seed", "3", "--out", a.to_str().unwrap()]).status.success());
    assert!(horosvm(&["synth", "--seed", "3", "--out", b.to_str().unwrap()]).status.success());
    let text = std::fs::read_to_string(&a).unwrap();
    assert_eq!(text, std::fs::read_to_string(&b).unwrap());
    let data = horosvm::data::parse_dataset(&text).unwrap();
    assert_eq!((data.len(), data.dim()), (400, 2));
    assert_eq!(data.labels().iter().filter(|l| *l == "1").count(), 200);
}

#[test]
fn usage_errors_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("x.csv");
    assert_eq!(horosvm(&["synth", "--per-class", "0", "--out", out.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(horosvm(&["train"]).status.code(), Some(2));
    assert_eq!(horosvm(&["cv", "--data", bundled().to_str().unwrap(), "--folds", "1"]).status.code(), Some(2));
    assert_eq!(horosvm(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn unreadable_data_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("missing.csv");
    assert_eq!(horosvm(&["train", "--data", missing.to_str().unwrap()]).status.code(), Some(3));
    let bad = dir.path().join("bad.csv");
    std::fs::write(&bad, "dim=2\n0.1,0.2,1\n1.2,0.0,-1\n").unwrap();
    let o = horosvm(&["train", "--data", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("row 1"));
}

#[test]
fn help_exits_0() {
    let o = horosvm(&["--help"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("noise-bench"));
}

#[test]
fn cap_training_reports_the_margin() {
    let dir = tempfile::tempdir().unwrap();
    let data = dir.path().join("cap.csv");
    let model = dir.path().join("cap.model");
    let gap = 0.3;
    let o = horosvm(&["synth", "--kind", "cap", "--per-class", "50", "--gap", "0.3", "--seed", "2", "--out", data.to_str().unwrap()]);
    assert!(o.status.success());
    let o = horosvm(&["train", "--data", data.to_str().unwrap(), "--c", "100", "--model-out", model.to_str().unwrap()]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(field(&text, "margin") >= gap - 0.05, "{text}");
    assert!(field(&text, "iterations") > 0.0);
    let o = horosvm(&["eval", "--model", model.to_str().unwrap(), "--data", data.to_str().unwrap()]);
    assert_eq!(field(&stdout(&o), "macro_f1"), 1.0);
}

#[test]
fn multiclass_training_is_one_vs_rest() {
    let dir = tempfile::tempdir().unwrap();
    let model = dir.path().join("m.model");
    let labeled = dir.path().join("pred.csv");
    let data = bundled();
    let o = horosvm(&["train", "--data", data.to_str().unwrap(), "--max-iters", "300", "--model-out", model.to_str().unwrap()]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().filter(|l| l.starts_with("class ")).count(), 4);
    assert!(std::fs::read_to_string(&model).unwrap().starts_with("kind = ovr"));
    let o = horosvm(&["predict", "--model", model.to_str().unwrap(), "--data", data.to_str().unwrap(), "--out", labeled.to_str().unwrap()]);
    assert!(o.status.success());
    let predicted = horosvm::data::read_dataset(&labeled).unwrap();
    assert_eq!(predicted.len(), 100);
    assert!(predicted.labels().iter().all(|l| ["0", "1", "2", "3"].contains(&l.as_str())));
}

#[test]
fn perceptron_on_multiclass_is_a_usage_error() {
    let o = horosvm(&["train", "--data", bundled().to_str().unwrap(), "--loss", "perceptron"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn cv_is_deterministic() {
    let data = bundled();
    let args = ["cv", "--data", data.to_str().unwrap(), "--max-iters", "200", "--restarts", "1", "--seed", "4"];
    let a = horosvm(&args);
    assert!(a.status.success());
    assert_eq!(stdout(&a), stdout(&horosvm(&args)));
    let text = stdout(&a);
    for c in ["C = 1:", "C = 5:", "C = 10:"] {
        assert!(text.contains(c), "{text}");
    }
    assert!(text.contains("selected_c = "));
}

#[test]
fn noise_bench_csv_shape() {
    let o = horosvm(&["noise-bench", "--datasets", "2", "--etas", "0,0.25,0.5", "--max-iters", "200", "--restarts", "1"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "eta,train_f1_mean,test_f1_mean,std");
    assert_eq!(lines.len(), 4);
    assert!(lines[3].starts_with("0.5,"));
}

#[test]
fn probe_command_reports_totals() {
    let o = horosvm(&["probe-convexity", "--samples", "2", "--geodesics", "50"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("total convexity_violations = "));
    assert!(text.contains("total concavity_violations = "));
}
