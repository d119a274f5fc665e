//! Tabular ingestion and the preprocessing chain:
//! standardize, SMOTE-balance, stratified subsample, PCA, angle scaling.

mod ingest;
mod pca;
mod profile;
mod scale;
mod transform;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use ingest::{
    load_csv, load_csv_with, read_processed_csv, write_processed_csv, LoadOptions, LoadReport,
};
pub use pca::{pca_fit_transform, PcaModel};
pub use profile::{preprocess, preprocess_with, PreprocessConfig, PreprocessReport, Profile};
pub use scale::AngleScaler;
pub use transform::{
    smote_balance, standardize, stratified_split, stratified_subsample, SmoteConfig, Standardizer,
    SyntheticOrigin,
};

/// Numeric feature table with a binary label column kept apart.
#[derive(Debug, Clone, PartialEq)]
pub struct RawTable {
    pub feature_names: Vec<String>,
    pub label_name: String,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl RawTable {
    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    /// Feature count excluding the label.
    pub fn n_columns(&self) -> usize {
        self.feature_names.len()
    }

    pub fn column_index(&self, name: &str) -> Option<usize> {
        self.feature_names.iter().position(|c| c == name)
    }

    pub fn into_matrix(self) -> Result<FeatureMatrix> {
        FeatureMatrix::new(self.feature_names, self.rows, self.labels)
    }
}

/// Labeled feature rows plus a log of the transforms applied to them.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FeatureMatrix {
    pub feature_names: Vec<String>,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
    pub notes: Vec<String>,
}

impl FeatureMatrix {
    pub fn new(feature_names: Vec<String>, rows: Vec<Vec<f64>>, labels: Vec<u8>) -> Result<Self> {
        if rows.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} rows but {} labels",
                rows.len(),
                labels.len()
            )));
        }
        let d = feature_names.len();
        for (i, r) in rows.iter().enumerate() {
            if r.len() != d {
                return Err(Error::Dimension(format!(
                    "row {i} has {} features, expected {d}",
                    r.len()
                )));
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput(format!(
                    "row {i} has non-finite values"
                )));
            }
        }
        if let Some((i, y)) = labels.iter().enumerate().find(|(_, &y)| y > 1) {
            return Err(Error::InvalidInput(format!(
                "row {i} has label {y}; labels must be 0 or 1"
            )));
        }
        Ok(Self {
            feature_names,
            rows,
            labels,
            notes: Vec::new(),
        })
    }

    pub fn n_rows(&self) -> usize {
        self.rows.len()
    }

    pub fn n_features(&self) -> usize {
        self.feature_names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// `[count of label 0, count of label 1]`.
    pub fn class_counts(&self) -> [usize; 2] {
        let ones = self.labels.iter().filter(|&&y| y == 1).count();
        [self.labels.len() - ones, ones]
    }

    pub fn has_both_classes(&self) -> bool {
        let [a, b] = self.class_counts();
        a > 0 && b > 0
    }

    /// Rows at `indices`, in that order; notes are carried over.
    pub fn select(&self, indices: &[usize]) -> Self {
        Self {
            feature_names: self.feature_names.clone(),
            rows: indices.iter().map(|&i| self.rows[i].clone()).collect(),
            labels: indices.iter().map(|&i| self.labels[i]).collect(),
            notes: self.notes.clone(),
        }
    }

    /// Per-feature arithmetic mean of the rows with label `class`.
    pub fn class_mean(&self, class: u8) -> Result<Vec<f64>> {
        let mut sum = vec![0.0; self.n_features()];
        let mut count = 0usize;
        for (r, _) in self
            .rows
            .iter()
            .zip(&self.labels)
            .filter(|(_, &y)| y == class)
        {
            for (s, v) in sum.iter_mut().zip(r) {
                *s += v;
            }
            count += 1;
        }
        if count == 0 {
            return Err(Error::InsufficientData(format!(
                "no rows with label {class}"
            )));
        }
        Ok(sum.into_iter().map(|s| s / count as f64).collect())
    }

    pub(crate) fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }
}
