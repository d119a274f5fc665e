use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use qfeature_core::metrics::{welch_t_test, TTestResult};
use serde::Serialize;

use crate::output::{Run, SCHEMA_VERSION};
use crate::{Globals, UsageError};

#[derive(clap::Args)]
pub struct Args {
    /// Glob for the first set of metric files.
    #[arg(long)]
    pub a: String,
    /// Glob for the second set of metric files.
    #[arg(long)]
    pub b: String,
    /// Metric to compare: accuracy, precision, recall or f1.
    #[arg(long)]
    pub metric: Option<String>,
}

#[derive(Serialize)]
struct Doc {
    schema_version: u32,
    metric: String,
    files_a: Vec<String>,
    files_b: Vec<String>,
    samples_a: Vec<f64>,
    samples_b: Vec<f64>,
    result: TTestResult,
}

fn expand(pattern: &str) -> Result<Vec<PathBuf>> {
    let mut paths: Vec<PathBuf> = glob::glob(pattern)
        .map_err(|e| UsageError(format!("bad glob `{pattern}`: {e}")))?
        .collect::<std::result::Result<_, _>>()?;
    paths.sort();
    Ok(paths)
}

/// Reads `metrics.<metric>` from a metrics document, or a top-level
/// `<metric>` field.
fn read_metric(path: &Path, metric: &str) -> Result<f64> {
    let text =
        std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    let v: serde_json::Value = serde_json::from_str(&text)
        .map_err(|e| qfeature_core::Error::InvalidInput(format!("{}: {e}", path.display())))?;
    v.get("metrics")
        .and_then(|m| m.get(metric))
        .or_else(|| v.get(metric))
        .and_then(serde_json::Value::as_f64)
        .ok_or_else(|| {
            qfeature_core::Error::InvalidInput(format!(
                "{}: no numeric `{metric}` field",
                path.display()
            ))
            .into()
        })
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let metric = s.get("metric", a.metric.clone(), "accuracy".to_string())?;
    if !["accuracy", "precision", "recall", "f1"].contains(&metric.as_str()) {
        return Err(UsageError(format!("unknown metric `{metric}`")).into());
    }
    let mut run = Run::start("ttest", &g.out);
    let fa = expand(&a.a)?;
    let fb = expand(&a.b)?;
    for (side, files) in [("a", &fa), ("b", &fb)] {
        if files.len() < 2 {
            return Err(qfeature_core::Error::InsufficientData(format!(
                "set {side} matched {} metric file(s); at least 2 are needed",
                files.len()
            ))
            .into());
        }
    }
    let samples = |files: &[PathBuf], run: &mut Run| -> Result<Vec<f64>> {
        files
            .iter()
            .map(|p| {
                run.input(p);
                read_metric(p, &metric)
            })
            .collect()
    };
    let sa = samples(&fa, &mut run)?;
    let sb = samples(&fb, &mut run)?;
    let result = welch_t_test(&sa, &sb)?;
    let show = |v: &[PathBuf]| v.iter().map(|p| p.display().to_string()).collect();
    let doc = Doc {
        schema_version: SCHEMA_VERSION,
        metric: metric.clone(),
        files_a: show(&fa),
        files_b: show(&fb),
        samples_a: sa,
        samples_b: sb,
        result,
    };
    let path = run.write_json("ttest.json", &doc)?;
    run.finish(seed, s.resolved())?;
    println!(
        "wrote {}: t = {}, p = {:.4}, significant = {}",
        path.display(),
        result.t_statistic,
        result.p_value,
        result.significant
    );
    Ok(())
}
