use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn qfeature(out: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qfeature"))
        .args(args)
        .arg("--out")
        .arg(out)
        .output()
        .expect("running qfeature")
}

fn ok(out: &Path, args: &[&str]) -> Output {
    let o = qfeature(out, args);
    assert!(
        o.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    o
}

fn synthetic(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/synthetic")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn path(dir: &TempDir, name: &str) -> String {
    dir.path().join(name).to_string_lossy().into_owned()
}

fn json(p: &str) -> serde_json::Value {
    serde_json::from_slice(&std::fs::read(p).unwrap()).unwrap()
}

/// Small two-class processed table written directly.
fn tiny_table(dir: &TempDir, name: &str, single_class: bool) -> String {
    let mut text = String::from("f1,f2,f3,label\n");
    for i in 0..24 {
        let y = if single_class { 1 } else { i % 2 };
        let c = if y == 1 { 1.0 } else { -1.0 };
        let t = i as f64 * 0.01;
        text.push_str(&format!("{},{},{},{y}\n", c + t, c - t, 0.5 * c));
    }
    let p = path(dir, name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn missing_input_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let missing = path(&dir, "no_such.csv");
    let o = qfeature(
        dir.path(),
        &["preprocess", "--input", &missing, "--profile", "ccf"],
    );
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("no_such.csv"));
}

#[test]
fn bad_flag_value_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    let o = qfeature(
        dir.path(),
        &["train", "--data", &data, "--mode", "sideways"],
    );
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn preprocess_is_reproducible() {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let input = synthetic("ccf_synthetic.csv");
    for d in [&a, &b] {
        ok(
            d.path(),
            &[
                "preprocess",
                "--input",
                &input,
                "--profile",
                "ccf",
                "--seed",
                "3",
            ],
        );
    }
    let pa = std::fs::read(a.path().join("processed.csv")).unwrap();
    assert_eq!(pa, std::fs::read(b.path().join("processed.csv")).unwrap());
    let text = String::from_utf8(pa).unwrap();
    assert!(text.starts_with("f1,f2,f3,f4,f5,f6,f7,label\n"));
    assert_eq!(text.lines().count(), 501);
    let sidecar = json(&path(&a, "processed.json"));
    assert_eq!(sidecar["schema_version"], 1);
    let manifest = json(&path(&a, "preprocess.manifest.json"));
    assert_eq!(manifest["seed"], 3);
    assert_eq!(manifest["inputs"].as_array().unwrap().len(), 1);
}

#[test]
fn lp_profile_drops_incomplete_rows() {
    let dir = tempfile::tempdir().unwrap();
    let o = ok(
        dir.path(),
        &[
            "preprocess",
            "--input",
            &synthetic("lp_synthetic.csv"),
            "--profile",
            "lp",
        ],
    );
    let stdout = String::from_utf8_lossy(&o.stdout);
    assert!(stdout.contains("500 rows x 7 features"), "{stdout}");
}

#[test]
fn uu_only_trace_has_one_row() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(dir.path(), &["train", "--data", &data, "--mode", "uu_only"]);
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    let lines: Vec<&str> = trace.lines().collect();
    assert_eq!(lines[0], "iteration,loss,accuracy,evaluations");
    assert_eq!(lines.len(), 2);
}

#[test]
fn separable_uu_only_model_scores_perfectly() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(dir.path(), &["train", "--data", &data, "--mode", "uu_only"]);
    let model = path(&dir, "model.json");
    ok(
        dir.path(),
        &["evaluate", "--model", &model, "--data", &data],
    );
    let m = json(&path(&dir, "metrics.json"));
    assert_eq!(m["metrics"]["accuracy"], 1.0);
    assert_eq!(m["schema_version"], 1);
    let confusion = std::fs::read_to_string(dir.path().join("confusion.csv")).unwrap();
    assert!(confusion.lines().count() >= 2);
}

#[test]
fn full_train_evaluate_and_sweep() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(
        dir.path(),
        &[
            "train",
            "--data",
            &data,
            "--seed",
            "1",
            "--iteration-budget",
            "15",
        ],
    );
    let model = path(&dir, "model.json");
    let trace = std::fs::read_to_string(dir.path().join("trace.csv")).unwrap();
    assert!(trace.lines().count() <= 17);
    ok(
        dir.path(),
        &["noise-sweep", "--model", &model, "--data", &data],
    );
    let sweep = std::fs::read_to_string(dir.path().join("noise_sweep.csv")).unwrap();
    let rows: Vec<&str> = sweep.lines().collect();
    assert_eq!(rows[0], "channel,strength,accuracy");
    assert_eq!(rows.len(), 61);
    ok(
        dir.path(),
        &["evaluate", "--model", &model, "--data", &data],
    );
    let clean = json(&path(&dir, "metrics.json"))["metrics"]["accuracy"]
        .as_f64()
        .unwrap();
    for r in &rows[1..] {
        let cols: Vec<&str> = r.split(',').collect();
        if cols[1] == "0.00" {
            assert_eq!(cols[2].parse::<f64>().unwrap(), clean, "{r}");
        }
    }
    ok(
        dir.path(),
        &[
            "noise-sweep",
            "--model",
            &model,
            "--data",
            &data,
            "--channels",
            "bit_flip,depolarizing",
            "--grid",
            "0,0.5",
        ],
    );
    let small = std::fs::read_to_string(dir.path().join("noise_sweep.csv")).unwrap();
    assert_eq!(small.lines().count(), 5);
}

#[test]
fn noisy_evaluation_runs() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(
        dir.path(),
        &["train", "--data", &data, "--iteration-budget", "5"],
    );
    let model = path(&dir, "model.json");
    ok(
        dir.path(),
        &[
            "evaluate",
            "--model",
            &model,
            "--data",
            &data,
            "--channel",
            "amplitude_damping",
            "--strength",
            "0.3",
        ],
    );
    let m = json(&path(&dir, "metrics.json"));
    assert_eq!(m["noise"]["channel"], "amplitude_damping");
    let o = qfeature(
        dir.path(),
        &[
            "evaluate",
            "--model",
            &model,
            "--data",
            &data,
            "--channel",
            "bit_flip",
            "--strength",
            "1.5",
        ],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn dimension_mismatch_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(dir.path(), &["train", "--data", &data, "--mode", "uu_only"]);
    let wide = path(&dir, "wide.csv");
    std::fs::write(&wide, "f1,f2,label\n0,1,0\n1,0,1\n").unwrap();
    let o = qfeature(
        dir.path(),
        &[
            "evaluate",
            "--model",
            &path(&dir, "model.json"),
            "--data",
            &wide,
        ],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn baselines_write_metrics() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(dir.path(), &["baseline", "--data", &data, "--model", "lr"]);
    ok(
        dir.path(),
        &["baseline", "--data", &data, "--model", "knn", "--k", "3"],
    );
    assert_eq!(
        json(&path(&dir, "baseline_lr.json"))["metrics"]["accuracy"],
        1.0
    );
    assert_eq!(
        json(&path(&dir, "baseline_knn.json"))["metrics"]["accuracy"],
        1.0
    );
}

#[test]
fn single_class_baseline_fails() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "one.csv", true);
    let o = qfeature(dir.path(), &["baseline", "--data", &data, "--model", "lr"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!String::from_utf8_lossy(&o.stderr).is_empty());
}

fn metric_file(dir: &TempDir, name: &str, accuracy: f64) {
    let doc = serde_json::json!({ "schema_version": 1, "metrics": { "accuracy": accuracy } });
    std::fs::write(dir.path().join(name), doc.to_string()).unwrap();
}

#[test]
fn ttest_identical_sets() {
    let dir = tempfile::tempdir().unwrap();
    for (i, acc) in [0.80, 0.82, 0.79].iter().enumerate() {
        metric_file(&dir, &format!("a{i}.json"), *acc);
        metric_file(&dir, &format!("b{i}.json"), *acc);
    }
    ok(
        dir.path(),
        &[
            "ttest",
            "--a",
            &path(&dir, "a*.json"),
            "--b",
            &path(&dir, "b*.json"),
        ],
    );
    let r = json(&path(&dir, "ttest.json"));
    assert_eq!(r["result"]["t_statistic"], 0.0);
    assert_eq!(r["result"]["p_value"], 1.0);
    assert_eq!(r["result"]["significant"], false);
}

#[test]
fn ttest_constant_sets_give_negative_infinity() {
    let dir = tempfile::tempdir().unwrap();
    for i in 0..5 {
        metric_file(&dir, &format!("q{i}.json"), 0.822);
        metric_file(&dir, &format!("c{i}.json"), 1.0);
    }
    ok(
        dir.path(),
        &[
            "ttest",
            "--a",
            &path(&dir, "q*.json"),
            "--b",
            &path(&dir, "c*.json"),
        ],
    );
    let r = json(&path(&dir, "ttest.json"));
    assert_eq!(r["result"]["t_statistic"], "-inf");
    assert_eq!(r["result"]["p_value"], 0.0);
    assert_eq!(r["result"]["significant"], true);
}

#[test]
fn ttest_matches_library_on_three_runs() {
    let dir = tempfile::tempdir().unwrap();
    for (i, (a, b)) in [(2.1, 1.9), (2.5, 2.0), (2.3, 2.1)].iter().enumerate() {
        metric_file(&dir, &format!("a{i}.json"), *a);
        metric_file(&dir, &format!("b{i}.json"), *b);
    }
    ok(
        dir.path(),
        &[
            "ttest",
            "--a",
            &path(&dir, "a*.json"),
            "--b",
            &path(&dir, "b*.json"),
        ],
    );
    let r = json(&path(&dir, "ttest.json"));
    let want = qfeature_core::metrics::welch_t_test(&[2.1, 2.5, 2.3], &[1.9, 2.0, 2.1]).unwrap();
    assert_eq!(
        r["result"]["t_statistic"].as_f64().unwrap(),
        want.t_statistic
    );
    assert_eq!(r["result"]["p_value"].as_f64().unwrap(), want.p_value);
}

#[test]
fn ttest_needs_two_runs_per_side() {
    let dir = tempfile::tempdir().unwrap();
    metric_file(&dir, "a0.json", 0.8);
    metric_file(&dir, "b0.json", 0.7);
    metric_file(&dir, "b1.json", 0.75);
    let o = qfeature(
        dir.path(),
        &[
            "ttest",
            "--a",
            &path(&dir, "a*.json"),
            "--b",
            &path(&dir, "b*.json"),
        ],
    );
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    let cfg = path(&dir, "run.cfg");
    std::fs::write(&cfg, "# experiment\nmode = uu_only\nseed = 5\n").unwrap();
    ok(dir.path(), &["train", "--data", &data, "--config", &cfg]);
    let m = json(&path(&dir, "model.json"));
    assert_eq!(m["config"]["mode"], "uu_only");
    let manifest = json(&path(&dir, "train.manifest.json"));
    assert_eq!(manifest["seed"], 5);
    ok(
        dir.path(),
        &[
            "train",
            "--data",
            &data,
            "--config",
            &cfg,
            "--mode",
            "variational_only",
            "--iteration-budget",
            "3",
        ],
    );
    assert_eq!(
        json(&path(&dir, "model.json"))["config"]["mode"],
        "variational_only"
    );
    std::fs::write(&cfg, "colour = blue\n").unwrap();
    let o = qfeature(dir.path(), &["train", "--data", &data, "--config", &cfg]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn holdout_split_is_written() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(
        dir.path(),
        &[
            "train",
            "--data",
            &data,
            "--holdout",
            "0.25",
            "--iteration-budget",
            "3",
        ],
    );
    let train = std::fs::read_to_string(dir.path().join("holdout_train.csv")).unwrap();
    let test = std::fs::read_to_string(dir.path().join("holdout_test.csv")).unwrap();
    assert_eq!(train.lines().count() - 1 + test.lines().count() - 1, 24);
    assert_eq!(test.lines().count() - 1, 6);
}

#[test]
fn report_tabulates_metric_files() {
    let dir = tempfile::tempdir().unwrap();
    let data = tiny_table(&dir, "t.csv", false);
    ok(dir.path(), &["baseline", "--data", &data, "--model", "lr"]);
    ok(
        dir.path(),
        &[
            "report",
            "--dir",
            &dir.path().to_string_lossy(),
            "--dataset",
            "ccf",
        ],
    );
    let csv = std::fs::read_to_string(dir.path().join("report.csv")).unwrap();
    assert!(csv.lines().next().unwrap().contains("accuracy"));
    assert!(csv.contains("reported"));
    assert!(dir.path().join("report.txt").exists());
}
