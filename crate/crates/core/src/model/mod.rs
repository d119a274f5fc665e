//! The encode / un-encode classifier with interleaved variational blocks:
//! circuit assembly, scoring, training and evaluation.

mod circuit;
mod train;

use std::fmt;
use std::path::Path;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::data::AngleScaler;
use crate::error::{Error, Result};
use crate::optimizer::OptimizerConfig;

pub use circuit::{assemble_circuit, build_pqc, build_pqc_stage, score};
pub use train::{evaluate, loss, predict, predict_all, sweep_noise, train, Evaluation, SweepRow};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    /// `U(test) . PQC_A . U^dagger(centroid) . PQC_B`, argmax over centroids.
    Full,
    /// `U(test) . U^dagger(centroid)`, no trained parameters.
    UuOnly,
    /// `U(test) . PQC_A`, class 1 when qubit 0 reads 0 with probability < 0.5.
    VariationalOnly,
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Full => "full",
            Mode::UuOnly => "uu_only",
            Mode::VariationalOnly => "variational_only",
        })
    }
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "full" => Ok(Mode::Full),
            "uu_only" => Ok(Mode::UuOnly),
            "variational_only" => Ok(Mode::VariationalOnly),
            _ => Err(Error::InvalidInput(format!(
                "unknown mode `{s}` (expected full, uu_only or variational_only)"
            ))),
        }
    }
}

/// Where a noise channel acts during noisy scoring.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum NoisePlacement {
    /// On every qubit after each circuit stage.
    PerStage,
    /// On the target and control qubits after each gate.
    PerGate,
}

impl fmt::Display for NoisePlacement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            NoisePlacement::PerStage => "per_stage",
            NoisePlacement::PerGate => "per_gate",
        })
    }
}

impl FromStr for NoisePlacement {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "per_stage" => Ok(NoisePlacement::PerStage),
            "per_gate" => Ok(NoisePlacement::PerGate),
            _ => Err(Error::InvalidInput(format!(
                "unknown noise placement `{s}` (expected per_stage or per_gate)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelConfig {
    pub n_qubits: usize,
    pub mode: Mode,
    /// Use one parameter block for both PQCs in full mode.
    pub share_pqc_params: bool,
    /// Optimizer iteration cap; overrides the optimizer's own budget.
    pub iteration_budget: usize,
    /// Seed for the initial parameters.
    pub seed: u64,
    pub noise_placement: NoisePlacement,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            n_qubits: 3,
            mode: Mode::Full,
            share_pqc_params: false,
            iteration_budget: 10,
            seed: 0,
            noise_placement: NoisePlacement::PerStage,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        if self.n_qubits == 0 || self.n_qubits > 12 {
            return Err(Error::InvalidInput(format!(
                "n_qubits must lie in 1..=12, got {}",
                self.n_qubits
            )));
        }
        if self.iteration_budget == 0 {
            return Err(Error::InvalidInput(
                "iteration_budget must be at least 1".into(),
            ));
        }
        Ok(())
    }

    /// Angles per PQC block, `3n`.
    pub fn block_len(&self) -> usize {
        3 * self.n_qubits
    }

    pub fn param_count(&self) -> usize {
        match self.mode {
            Mode::UuOnly => 0,
            Mode::VariationalOnly => self.block_len(),
            Mode::Full if self.share_pqc_params => self.block_len(),
            Mode::Full => 2 * self.block_len(),
        }
    }
}

/// Angles of the first and second PQC blocks.
pub type BlockPair<'a> = (Option<&'a [f64]>, Option<&'a [f64]>);

/// Trainable rotation angles in radians.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ParamVector(Vec<f64>);

impl ParamVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidInput("parameters must be finite".into()));
        }
        Ok(Self(values))
    }

    pub fn empty() -> Self {
        Self(Vec::new())
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn check(&self, config: &ModelConfig) -> Result<()> {
        if self.len() != config.param_count() {
            return Err(Error::InvalidInput(format!(
                "{} mode with {} qubits{} needs {} parameters, got {}",
                config.mode,
                config.n_qubits,
                if config.share_pqc_params {
                    " (shared)"
                } else {
                    ""
                },
                config.param_count(),
                self.len()
            )));
        }
        Ok(())
    }

    /// Angles of the first and second PQC blocks, where present.
    pub fn blocks(&self, config: &ModelConfig) -> Result<BlockPair<'_>> {
        self.check(config)?;
        let b = config.block_len();
        Ok(match config.mode {
            Mode::UuOnly => (None, None),
            Mode::VariationalOnly => (Some(&self.0[..]), None),
            Mode::Full if config.share_pqc_params => (Some(&self.0[..]), Some(&self.0[..])),
            Mode::Full => (Some(&self.0[..b]), Some(&self.0[b..])),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Centroid {
    pub class_label: u8,
    /// Mean training features, before angle scaling.
    pub feature_means: Vec<f64>,
}

/// Best-so-far training progress after one optimizer iteration.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TraceRow {
    pub iteration: usize,
    pub evaluations: usize,
    pub loss: f64,
    pub accuracy: f64,
}

/// Everything a prediction needs apart from the trained angles.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelContext {
    pub config: ModelConfig,
    pub angle_scaler: AngleScaler,
    /// Class 0 first, then class 1.
    pub centroids: Vec<Centroid>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainedModel {
    pub schema_version: u32,
    pub config: ModelConfig,
    pub optimizer: OptimizerConfig,
    pub params: ParamVector,
    pub centroids: Vec<Centroid>,
    pub angle_scaler: AngleScaler,
    pub training_trace: Vec<TraceRow>,
}

impl TrainedModel {
    pub fn context(&self) -> ModelContext {
        ModelContext {
            config: self.config.clone(),
            angle_scaler: self.angle_scaler.clone(),
            centroids: self.centroids.clone(),
        }
    }

    pub fn n_features(&self) -> usize {
        self.angle_scaler.n_features()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let m: Self = serde_json::from_str(text)?;
        if m.schema_version != MODEL_SCHEMA_VERSION {
            return Err(Error::InvalidInput(format!(
                "model schema_version {} is not supported (expected {MODEL_SCHEMA_VERSION})",
                m.schema_version
            )));
        }
        m.config.validate()?;
        m.params.check(&m.config)?;
        Ok(m)
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<Self> {
        if !path.exists() {
            return Err(Error::MissingFile(path.to_path_buf()));
        }
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parameter_counts() {
        let mut c = ModelConfig::default();
        assert_eq!(c.param_count(), 18);
        c.share_pqc_params = true;
        assert_eq!(c.param_count(), 9);
        c.mode = Mode::UuOnly;
        assert_eq!(c.param_count(), 0);
        c.mode = Mode::VariationalOnly;
        assert_eq!(c.param_count(), 9);
    }

    #[test]
    fn blocks_split() {
        let c = ModelConfig {
            n_qubits: 1,
            ..ModelConfig::default()
        };
        let p = ParamVector::new(vec![1.0, 2.0, 3.0, 4.0, 5.0, 6.0]).unwrap();
        let (a, b) = p.blocks(&c).unwrap();
        assert_eq!(a.unwrap(), &[1.0, 2.0, 3.0]);
        assert_eq!(b.unwrap(), &[4.0, 5.0, 6.0]);
        assert!(ParamVector::new(vec![0.0; 5]).unwrap().blocks(&c).is_err());
    }

    #[test]
    fn names_parse() {
        for m in [Mode::Full, Mode::UuOnly, Mode::VariationalOnly] {
            assert_eq!(m.to_string().parse::<Mode>().unwrap(), m);
        }
        assert!("both".parse::<Mode>().is_err());
        assert_eq!(
            "per_gate".parse::<NoisePlacement>().unwrap(),
            NoisePlacement::PerGate
        );
    }
}
