use std::path::PathBuf;

use anyhow::Result;
use qfeature_core::model::{evaluate, TrainedModel};
use qfeature_core::noise::{build_channel, ChannelKind};

use super::{confusion_csv, MetricsDoc, NoiseDoc};
use crate::output::{Run, SCHEMA_VERSION};
use crate::{Globals, UsageError};

#[derive(clap::Args)]
pub struct Args {
    /// Model file written by `train`.
    #[arg(long)]
    pub model: PathBuf,
    /// Processed CSV to score.
    #[arg(long)]
    pub data: PathBuf,
    /// Optional noise channel for density-matrix scoring.
    #[arg(long)]
    pub channel: Option<ChannelKind>,
    #[arg(long)]
    pub strength: Option<f64>,
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let channel = s.get_opt("channel", a.channel)?;
    let strength = s.get_opt("strength", a.strength)?;
    let noise = match (channel, strength) {
        (None, None) => None,
        (Some(k), Some(p)) => Some(build_channel(k, p)?),
        _ => {
            return Err(UsageError("--channel and --strength must be given together".into()).into())
        }
    };

    let mut run = Run::start("evaluate", &g.out);
    let model = TrainedModel::load(&a.model)?;
    run.input(&a.model);
    let data = super::load_table(&a.data)?;
    run.input(&a.data);
    let e = evaluate(&model, &data, noise.as_ref())?;
    let doc = MetricsDoc {
        schema_version: SCHEMA_VERSION,
        command: "evaluate".into(),
        model: format!("qfdnn_{}", model.config.mode),
        rows: data.n_rows(),
        noise: noise.as_ref().map(|c| NoiseDoc {
            channel: c.kind().to_string(),
            strength: c.strength(),
        }),
        metrics: e.metrics,
        confusion: e.confusion,
    };
    let path = run.write_json("metrics.json", &doc)?;
    run.write("confusion.csv", confusion_csv(&e.confusion).as_bytes())?;
    run.finish(seed, s.resolved())?;
    let m = &e.metrics;
    println!(
        "wrote {}: accuracy {:.4} precision {:.4} recall {:.4} f1 {:.4}",
        path.display(),
        m.accuracy,
        m.precision,
        m.recall,
        m.f1
    );
    Ok(())
}
