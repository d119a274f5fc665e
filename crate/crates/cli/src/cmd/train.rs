use std::fmt::Write as _;
use std::path::PathBuf;

use anyhow::Result;
use qfeature_core::data::{stratified_split, write_processed_csv, FeatureMatrix};
use qfeature_core::encoding::qubits_for_features;
use qfeature_core::model::{train, Mode, ModelConfig, NoisePlacement, TrainedModel};
use qfeature_core::optimizer::{Method, OptimizerConfig};
use qfeature_core::seeds::{derive_seed, SeedStream};

use crate::output::Run;
use crate::Globals;

#[derive(clap::Args)]
pub struct Args {
    /// Processed CSV (`f1..fd,label`).
    #[arg(long)]
    pub data: PathBuf,
    /// `full`, `uu_only` or `variational_only`.
    #[arg(long)]
    pub mode: Option<Mode>,
    /// Register size; defaults to the fewest qubits holding all features.
    #[arg(long)]
    pub n_qubits: Option<usize>,
    #[arg(long)]
    pub share_pqc_params: Option<bool>,
    #[arg(long)]
    pub iteration_budget: Option<usize>,
    /// `per_stage` or `per_gate`; stored with the model for noisy scoring.
    #[arg(long)]
    pub noise_placement: Option<NoisePlacement>,
    /// `cobyla` or `nelder_mead`.
    #[arg(long)]
    pub optimizer: Option<Method>,
    #[arg(long)]
    pub rho_begin: Option<f64>,
    #[arg(long)]
    pub rho_end: Option<f64>,
    #[arg(long)]
    pub max_evaluations: Option<usize>,
    /// Hold out this fraction of each class; the split is written alongside
    /// the model. Without it the model trains on every row.
    #[arg(long)]
    pub holdout: Option<f64>,
}

pub fn trace_csv(model: &TrainedModel) -> String {
    let mut s = String::from("iteration,loss,accuracy,evaluations\n");
    for t in &model.training_trace {
        let _ = writeln!(
            s,
            "{},{},{},{}",
            t.iteration, t.loss, t.accuracy, t.evaluations
        );
    }
    s
}

fn csv_bytes(m: &FeatureMatrix, dir: &std::path::Path, name: &str) -> Result<Vec<u8>> {
    std::fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(".{name}.build-{}", std::process::id()));
    write_processed_csv(&tmp, m)?;
    let bytes = std::fs::read(&tmp)?;
    std::fs::remove_file(&tmp)?;
    Ok(bytes)
}

pub fn run(a: &Args, g: &mut Globals) -> Result<()> {
    let s = &mut g.settings;
    let seed = s.get("seed", g.seed, 0u64)?;
    let data = super::load_table(&a.data)?;
    let defaults = ModelConfig::default();
    let mode = s.get("mode", a.mode, defaults.mode)?;
    let n_qubits = match s.get_opt("n_qubits", a.n_qubits)? {
        Some(n) => n,
        None => qubits_for_features(data.n_features())?,
    };
    s.note("n_qubits", n_qubits);
    let config = ModelConfig {
        n_qubits,
        mode,
        share_pqc_params: s.get(
            "share_pqc_params",
            a.share_pqc_params,
            defaults.share_pqc_params,
        )?,
        iteration_budget: s.get(
            "iteration_budget",
            a.iteration_budget,
            defaults.iteration_budget,
        )?,
        seed: derive_seed(seed, SeedStream::Init),
        noise_placement: s.get(
            "noise_placement",
            a.noise_placement,
            defaults.noise_placement,
        )?,
    };
    let od = OptimizerConfig::default();
    let optimizer = OptimizerConfig {
        method: s.get("optimizer", a.optimizer, od.method)?,
        rho_begin: s.get("rho_begin", a.rho_begin, od.rho_begin)?,
        rho_end: s.get("rho_end", a.rho_end, od.rho_end)?,
        max_evaluations: s.get("max_evaluations", a.max_evaluations, od.max_evaluations)?,
        iteration_budget: config.iteration_budget,
    };
    let holdout = s.get_opt("holdout", a.holdout)?;

    let mut run = Run::start("train", &g.out);
    run.input(&a.data);
    let train_set = match holdout {
        None => data,
        Some(f) => {
            let (tr, te) = stratified_split(&data, f, derive_seed(seed, SeedStream::Split))?;
            let dir = run.out_dir().to_path_buf();
            let b = csv_bytes(&tr, &dir, "holdout_train.csv")?;
            run.write("holdout_train.csv", &b)?;
            let b = csv_bytes(&te, &dir, "holdout_test.csv")?;
            run.write("holdout_test.csv", &b)?;
            tr
        }
    };

    let model = train(&train_set, &config, &optimizer)?;
    let model_path = run.write("model.json", model.to_json()?.as_bytes())?;
    run.write("trace.csv", trace_csv(&model).as_bytes())?;
    run.finish(seed, s.resolved())?;
    let last = model
        .training_trace
        .last()
        .expect("trace has at least one row");
    println!(
        "wrote {} ({} mode, {} parameters, best training accuracy {:.4} after {} iterations / {} evaluations)",
        model_path.display(),
        model.config.mode,
        model.params.len(),
        last.accuracy,
        last.iteration,
        last.evaluations
    );
    Ok(())
}
