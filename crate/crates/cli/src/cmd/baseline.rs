use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use anyhow::Result;
use qfeature_core::baselines::{knn_predict, logreg_predict, logreg_train, KnnModel, LogRegConfig};
use qfeature_core::metrics::confusion_and_metrics;

use super::{confusion_csv, MetricsDoc};
use crate::output::{Run, SCHEMA_VERSION};
use crate::{Globals, UsageError};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Kind {
    Lr,
    Knn,
}

impl FromStr for Kind {
    type Err = UsageError;

    fn from_str(s: &str) -> Result<Self, UsageError> {
        match s {
            "lr" => Ok(Kind::Lr),
            "knn" => Ok(Kind::Knn),
            _ => Err(UsageError(format!(
                "unknown baseline `{s}` (expected lr or knn)"
            ))),
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Kind::Lr => "lr",
            Kind::Knn => "knn",
        })
    }
}

#[derive(clap::Args)]
pub struct Args {
    /// Processed CSV; the baseline trains and scores on it.
    #[arg(long)]
    pub data: PathBuf,
    /// `lr` or `knn`.
    #[arg(long)]
    pub model: Kind,
    /// Neighbors for knn.
    #[arg(long)]
    pub k: Option<usize>,
    #[arg(long)]
    pub learning_rate: Option<f64>,
    #[arg(long)]
    pub max_iterations: Option<usize>,
    #[arg(long)]
    pub l2_strength: Option<f64>,
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let mut run = Run::start("baseline", &g.out);
    let data = super::load_table(&a.data)?;
    run.input(&a.data);
    s.note("model", a.model);

    let preds = match a.model {
        Kind::Lr => {
            let d = LogRegConfig::default();
            let cfg = LogRegConfig {
                learning_rate: s.get("learning_rate", a.learning_rate, d.learning_rate)?,
                max_iterations: s.get("max_iterations", a.max_iterations, d.max_iterations)?,
                l2_strength: s.get("l2_strength", a.l2_strength, d.l2_strength)?,
            };
            let m = logreg_train(&data, &cfg)?;
            logreg_predict(&m, &data)
        }
        Kind::Knn => {
            let k = s.get("k", a.k, 5usize)?;
            let m = KnnModel::fit(&data, k)?;
            data.rows.iter().map(|r| knn_predict(&m, r)).collect()
        }
    };
    let (confusion, metrics) = confusion_and_metrics(&preds, &data.labels)?;
    let doc = MetricsDoc {
        schema_version: SCHEMA_VERSION,
        command: "baseline".into(),
        model: a.model.to_string(),
        rows: data.n_rows(),
        noise: None,
        metrics,
        confusion,
    };
    let path = run.write_json(&format!("baseline_{}.json", a.model), &doc)?;
    run.write(
        &format!("baseline_{}_confusion.csv", a.model),
        confusion_csv(&confusion).as_bytes(),
    )?;
    run.finish(seed, s.resolved())?;
    println!("wrote {}: accuracy {:.4}", path.display(), metrics.accuracy);
    Ok(())
}
