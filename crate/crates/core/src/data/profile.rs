//! Dataset profiles and the full preprocessing chain.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::{derive_seed, SeedStream};

use super::{
    pca_fit_transform, smote_balance, standardize, stratified_subsample, FeatureMatrix,
    LoadOptions, RawTable, SmoteConfig,
};

/// Known source layouts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Profile {
    /// Card transactions: label `Class`, `Time` and `Amount` excluded.
    Ccf,
    /// Loan applications: label `Loan_Status` (`Y` positive), `Loan_ID`
    /// excluded, categorical columns integer-coded.
    Lp,
}

impl Profile {
    pub fn label(self) -> &'static str {
        match self {
            Profile::Ccf => "Class",
            Profile::Lp => "Loan_Status",
        }
    }

    pub fn dropped_columns(self) -> &'static [&'static str] {
        match self {
            Profile::Ccf => &["Time", "Amount"],
            Profile::Lp => &["Loan_ID"],
        }
    }

    /// Ingestion settings. CCF columns are kept at load time and dropped by
    /// [`preprocess`]; the LP identifier is skipped before parsing.
    pub fn load_options(self) -> LoadOptions {
        match self {
            Profile::Ccf => LoadOptions::strict(self.label()),
            Profile::Lp => LoadOptions {
                label: self.label().into(),
                positive_label: Some("Y".into()),
                drop: self
                    .dropped_columns()
                    .iter()
                    .map(|s| s.to_string())
                    .collect(),
                code_categorical: true,
                drop_missing: true,
            },
        }
    }
}

impl fmt::Display for Profile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Profile::Ccf => "ccf",
            Profile::Lp => "lp",
        })
    }
}

impl FromStr for Profile {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ccf" => Ok(Profile::Ccf),
            "lp" => Ok(Profile::Lp),
            _ => Err(Error::InvalidInput(format!(
                "unknown profile `{s}` (expected ccf or lp)"
            ))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessConfig {
    pub sample_size: usize,
    pub n_components: usize,
    pub smote_k: usize,
}

impl Default for PreprocessConfig {
    fn default() -> Self {
        Self {
            sample_size: 500,
            n_components: 7,
            smote_k: 5,
        }
    }
}

/// Row counts and fitted quantities from one preprocessing run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PreprocessReport {
    pub profile: Profile,
    pub seed: u64,
    pub config: PreprocessConfig,
    pub input_rows: usize,
    pub input_features: usize,
    pub dropped_columns: Vec<String>,
    pub class_counts_in: [usize; 2],
    pub synthetic_rows: usize,
    pub class_counts_balanced: [usize; 2],
    pub class_counts_out: [usize; 2],
    pub explained_variance_ratio: Vec<f64>,
    pub transforms: Vec<String>,
}

pub fn preprocess(
    raw: &RawTable,
    profile: Profile,
    seed: u64,
) -> Result<(FeatureMatrix, PreprocessReport)> {
    preprocess_with(raw, profile, seed, &PreprocessConfig::default())
}

/// Drop profile columns, standardize, SMOTE-balance, stratified subsample,
/// PCA. Deterministic in `(raw, profile, seed, cfg)`.
pub fn preprocess_with(
    raw: &RawTable,
    profile: Profile,
    seed: u64,
    cfg: &PreprocessConfig,
) -> Result<(FeatureMatrix, PreprocessReport)> {
    let dropped: Vec<String> = profile
        .dropped_columns()
        .iter()
        .filter(|c| raw.column_index(c).is_some())
        .map(|c| c.to_string())
        .collect();
    let keep: Vec<usize> = (0..raw.n_columns())
        .filter(|&j| !dropped.contains(&raw.feature_names[j]))
        .collect();
    let names = keep.iter().map(|&j| raw.feature_names[j].clone()).collect();
    let rows = raw
        .rows
        .iter()
        .map(|r| keep.iter().map(|&j| r[j]).collect())
        .collect();
    let mut x = FeatureMatrix::new(names, rows, raw.labels.clone())?;
    if !dropped.is_empty() {
        x = x.with_note(format!("drop columns: {}", dropped.join(", ")));
    }
    if !x.has_both_classes() {
        return Err(Error::InvalidInput(format!(
            "label column `{}` must contain both classes",
            raw.label_name
        )));
    }
    let class_counts_in = x.class_counts();

    let (_, x) = standardize(&x)?;
    let smote = SmoteConfig {
        k_neighbors: cfg.smote_k,
        target_count: None,
        seed: derive_seed(seed, SeedStream::Smote),
    };
    let (x, origins) = smote_balance(&x, &smote)?;
    let class_counts_balanced = x.class_counts();
    if x.n_rows() < cfg.sample_size {
        return Err(Error::InsufficientData(format!(
            "{} rows available after balancing, {} required",
            x.n_rows(),
            cfg.sample_size
        )));
    }
    let x = stratified_subsample(
        &x,
        cfg.sample_size,
        derive_seed(seed, SeedStream::Subsample),
    )?;
    let (pca, x) = pca_fit_transform(&x, cfg.n_components)?;

    let report = PreprocessReport {
        profile,
        seed,
        config: cfg.clone(),
        input_rows: raw.n_rows(),
        input_features: raw.n_columns(),
        dropped_columns: dropped,
        class_counts_in,
        synthetic_rows: origins.len(),
        class_counts_balanced,
        class_counts_out: x.class_counts(),
        explained_variance_ratio: pca.explained_variance_ratio,
        transforms: x.notes.clone(),
    };
    Ok((x, report))
}
