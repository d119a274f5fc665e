use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use qfeature_core::data::Profile;

use super::MetricsDoc;
use crate::output::Run;
use crate::Globals;

#[derive(clap::Args)]
pub struct Args {
    /// Directory searched (non-recursively) for metric files.
    #[arg(long)]
    pub dir: PathBuf,
    /// Adds the reported reference rows for this dataset (`ccf` or `lp`).
    #[arg(long)]
    pub dataset: Option<Profile>,
}

struct Row {
    model: String,
    source: &'static str,
    values: [f64; 4],
}

/// Published reference figures for classifiers that are not implemented
/// here, as accuracy, precision, recall, f1.
fn reported(dataset: Profile) -> Vec<(&'static str, [f64; 4])> {
    match dataset {
        Profile::Ccf => vec![
            ("svm", [0.9908, 0.990, 1.000, 0.9950]),
            ("ann", [0.9908, 0.990, 1.000, 0.9950]),
            ("random_forest", [1.0, 1.0, 1.0, 1.0]),
            ("gradient_boosting", [1.0, 1.0, 1.0, 1.0]),
        ],
        Profile::Lp => vec![
            ("svm", [0.854, 0.832, 0.988, 0.903]),
            ("ann", [0.772, 0.813, 0.871, 0.841]),
            ("random_forest", [0.821, 0.839, 0.918, 0.876]),
            ("gradient_boosting", [0.813, 0.823, 0.929, 0.873]),
        ],
    }
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let dataset = s.get_opt("dataset", a.dataset)?;
    if !a.dir.is_dir() {
        return Err(qfeature_core::Error::MissingFile(a.dir.clone()).into());
    }
    let mut run = Run::start("report", &g.out);
    let mut paths: Vec<PathBuf> = std::fs::read_dir(&a.dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "json"))
        .collect();
    paths.sort();

    let mut rows = Vec::new();
    for p in &paths {
        let Ok(text) = std::fs::read_to_string(p) else {
            continue;
        };
        let Ok(doc) = serde_json::from_str::<MetricsDoc>(&text) else {
            continue;
        };
        run.input(p);
        let m = doc.metrics;
        let stem = p
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_default();
        rows.push(Row {
            model: format!("{} ({stem})", doc.model),
            source: "measured",
            values: [m.accuracy, m.precision, m.recall, m.f1],
        });
    }
    if let Some(d) = dataset {
        for (name, values) in reported(d) {
            rows.push(Row {
                model: name.to_string(),
                source: "reported",
                values,
            });
        }
    }

    let mut csv = String::from("model,source,accuracy,precision,recall,f1\n");
    for r in &rows {
        let [acc, p, rc, f] = r.values;
        let _ = writeln!(csv, "{},{},{acc},{p},{rc},{f}", r.model, r.source);
    }
    let width = rows.iter().map(|r| r.model.len()).max().unwrap_or(5).max(5);
    let mut txt = format!(
        "{:<width$}  {:<8}  {:>8}  {:>9}  {:>8}  {:>8}\n",
        "model", "source", "accuracy", "precision", "recall", "f1"
    );
    for r in &rows {
        let [acc, p, rc, f] = r.values;
        let _ = writeln!(
            txt,
            "{:<width$}  {:<8}  {acc:>8.4}  {p:>9.4}  {rc:>8.4}  {f:>8.4}",
            r.model, r.source
        );
    }
    run.write("report.csv", csv.as_bytes())?;
    let path = run.write("report.txt", txt.as_bytes())?;
    run.finish(seed, s.resolved())?;
    print!("{txt}");
    println!("wrote {}", path.display());
    Ok(())
}
