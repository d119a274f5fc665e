pub mod baseline;
pub mod evaluate;
pub mod preprocess;
pub mod report;
pub mod sweep;
pub mod train;
pub mod ttest;

use std::fmt::Write as _;
use std::path::Path;

use anyhow::Result;
use qfeature_core::data::{read_processed_csv, FeatureMatrix};
use qfeature_core::metrics::{ConfusionMatrix, MetricsReport};
use serde::{Deserialize, Serialize};

/// Scalar metric document shared by `evaluate` and `baseline`.
#[derive(Debug, Serialize, Deserialize)]
pub struct MetricsDoc {
    pub schema_version: u32,
    pub command: String,
    pub model: String,
    pub rows: usize,
    pub noise: Option<NoiseDoc>,
    pub metrics: MetricsReport,
    pub confusion: ConfusionMatrix,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct NoiseDoc {
    pub channel: String,
    pub strength: f64,
}

pub fn load_table(path: &Path) -> Result<FeatureMatrix> {
    Ok(read_processed_csv(path)?)
}

pub fn confusion_csv(cm: &ConfusionMatrix) -> String {
    let mut s = String::from("tp,fp,fn,tn\n");
    let _ = writeln!(s, "{},{},{},{}", cm.tp, cm.fp, cm.fn_, cm.tn);
    s
}
