//! `qfeature`: preprocessing, training, evaluation, noise sweeps, classical
//! baselines and significance tests as file-in / file-out commands.
//!
//! Exit status: 0 success, 1 I/O or other failure, 2 usage error or missing
//! input file, 3 invalid or insufficient data, 4 numerical failure.

mod cmd;
mod output;
mod settings;

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use settings::Settings;

/// Bad flags, config entries or argument combinations.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

#[derive(Parser)]
#[command(
    name = "qfeature",
    version,
    about = "Few-qubit quantum feature classifier experiments"
)]
struct Cli {
    /// Top-level seed; per-purpose seeds are derived from it.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Flat `key = value` file; command-line flags take precedence.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Turn a source CSV into the 7-feature processed table.
    Preprocess(cmd::preprocess::Args),
    /// Train a classifier on a processed table.
    Train(cmd::train::Args),
    /// Score a trained model on a processed table.
    Evaluate(cmd::evaluate::Args),
    /// Accuracy over noise channels and strengths.
    NoiseSweep(cmd::sweep::Args),
    /// Train and score a classical baseline.
    Baseline(cmd::baseline::Args),
    /// Welch t-test between two sets of metric files.
    Ttest(cmd::ttest::Args),
    /// Tabulate metric files as aligned text and CSV.
    Report(cmd::report::Args),
}

pub struct Globals {
    pub seed: Option<u64>,
    pub out: PathBuf,
    pub settings: Settings,
}

fn exit_code(err: &anyhow::Error) -> u8 {
    use qfeature_core::Error as E;
    for cause in err.chain() {
        if cause.downcast_ref::<UsageError>().is_some() {
            return 2;
        }
        if let Some(e) = cause.downcast_ref::<E>() {
            return match e {
                E::MissingFile(_) => 2,
                E::Io(_) => 1,
                E::NoConvergence { .. } | E::NonFiniteObjective { .. } | E::QubitIndex { .. } => 4,
                _ => 3,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return 1;
        }
    }
    1
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = Settings::load(cli.config.as_deref()).and_then(|settings| {
        let mut g = Globals {
            seed: cli.seed,
            out: cli.out,
            settings,
        };
        match &cli.command {
            Command::Preprocess(a) => cmd::preprocess::run(a, &mut g),
            Command::Train(a) => cmd::train::run(a, &mut g),
            Command::Evaluate(a) => cmd::evaluate::run(a, &mut g),
            Command::NoiseSweep(a) => cmd::sweep::run(a, &mut g),
            Command::Baseline(a) => cmd::baseline::run(a, &mut g),
            Command::Ttest(a) => cmd::ttest::run(a, &mut g),
            Command::Report(a) => cmd::report::run(a, &mut g),
        }
    });
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
