use std::path::PathBuf;

use anyhow::Result;
use qfeature_core::data::{
    load_csv_with, preprocess_with, write_processed_csv, LoadReport, PreprocessConfig,
    PreprocessReport, Profile,
};
use serde::Serialize;

use crate::output::{Run, SCHEMA_VERSION};
use crate::Globals;

#[derive(clap::Args)]
pub struct Args {
    /// Source CSV with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Source layout: `ccf` or `lp`.
    #[arg(long)]
    pub profile: Option<Profile>,
    #[arg(long)]
    pub sample_size: Option<usize>,
    #[arg(long)]
    pub n_components: Option<usize>,
    #[arg(long)]
    pub smote_k: Option<usize>,
}

#[derive(Serialize)]
struct Sidecar<'a> {
    schema_version: u32,
    source: String,
    load: &'a LoadReport,
    pipeline: &'a PreprocessReport,
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let profile = s.get("profile", a.profile, Profile::Ccf)?;
    let defaults = PreprocessConfig::default();
    let cfg = PreprocessConfig {
        sample_size: s.get("sample_size", a.sample_size, defaults.sample_size)?,
        n_components: s.get("n_components", a.n_components, defaults.n_components)?,
        smote_k: s.get("smote_k", a.smote_k, defaults.smote_k)?,
    };

    let mut run = Run::start("preprocess", &g.out);
    let (raw, load) = load_csv_with(&a.input, &profile.load_options())?;
    run.input(&a.input);
    let (matrix, report) = preprocess_with(&raw, profile, seed, &cfg)?;

    let tmp = tempfile_path(run.out_dir())?;
    write_processed_csv(&tmp, &matrix)?;
    let bytes = std::fs::read(&tmp)?;
    std::fs::remove_file(&tmp)?;
    let csv_path = run.write("processed.csv", &bytes)?;
    run.write_json(
        "processed.json",
        &Sidecar {
            schema_version: SCHEMA_VERSION,
            source: a.input.display().to_string(),
            load: &load,
            pipeline: &report,
        },
    )?;
    run.finish(seed, s.resolved())?;
    println!(
        "wrote {} ({} rows x {} features, classes {:?}, {} rows dropped for missing values)",
        csv_path.display(),
        matrix.n_rows(),
        matrix.n_features(),
        report.class_counts_out,
        load.rows_dropped_missing
    );
    Ok(())
}

fn tempfile_path(dir: &std::path::Path) -> Result<PathBuf> {
    std::fs::create_dir_all(dir)?;
    Ok(dir.join(format!(".processed.csv.build-{}", std::process::id())))
}
