use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use qfeature_core::model::{sweep_noise, TrainedModel};
use qfeature_core::noise::{strength_grid, ChannelKind};

use crate::output::Run;
use crate::{Globals, UsageError};

#[derive(clap::Args)]
pub struct Args {
    #[arg(long)]
    pub model: PathBuf,
    #[arg(long)]
    pub data: PathBuf,
    /// Comma-separated channel names; defaults to all six.
    #[arg(long)]
    pub channels: Option<String>,
    /// Comma-separated strengths; defaults to 0.00, 0.11, ..., 0.99.
    #[arg(long)]
    pub grid: Option<String>,
}

fn parse_list<T: std::str::FromStr>(text: &str, what: &str) -> Result<Vec<T>>
where
    T::Err: std::fmt::Display,
{
    let items: Vec<T> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            t.parse::<T>()
                .map_err(|e| UsageError(format!("{what} `{t}`: {e}")))
        })
        .collect::<std::result::Result<_, _>>()?;
    if items.is_empty() {
        return Err(UsageError(format!("empty {what} list")).into());
    }
    Ok(items)
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let default_channels = ChannelKind::ALL.map(|k| k.name()).join(",");
    let default_grid = strength_grid()
        .iter()
        .map(|p| format!("{p:.2}"))
        .collect::<Vec<_>>()
        .join(",");
    let channels: Vec<ChannelKind> = parse_list(
        &s.get("channels", a.channels.clone(), default_channels)?,
        "channel",
    )?;
    let grid: Vec<f64> = parse_list(&s.get("grid", a.grid.clone(), default_grid)?, "strength")?;

    let mut run = Run::start("noise-sweep", &g.out);
    let model = TrainedModel::load(&a.model)?;
    run.input(&a.model);
    let data = super::load_table(&a.data)?;
    run.input(&a.data);
    let rows = sweep_noise(&model, &data, &channels, &grid)?;

    let mut csv = String::from("channel,strength,accuracy\n");
    for r in &rows {
        let _ = writeln!(csv, "{},{:.2},{}", r.channel, r.strength, r.accuracy);
    }
    let path = run.write("noise_sweep.csv", csv.as_bytes())?;
    run.finish(seed, s.resolved())?;
    println!("wrote {} ({} rows)", path.display(), rows.len());
    Ok(())
}
