//! Classical reference classifiers: L2-regularized logistic regression and
//! k-nearest neighbors.

use serde::{Deserialize, Serialize};

use crate::data::FeatureMatrix;
use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegConfig {
    pub learning_rate: f64,
    pub max_iterations: usize,
    /// Penalty `l2 / (2n) * |w|^2` added to the mean log-loss; the bias is
    /// not penalized.
    pub l2_strength: f64,
}

impl Default for LogRegConfig {
    fn default() -> Self {
        Self {
            learning_rate: 0.1,
            max_iterations: 1000,
            l2_strength: 1.0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LogRegModel {
    pub weights: Vec<f64>,
    pub bias: f64,
    pub l2_strength: f64,
    pub max_iterations: usize,
}

fn sigmoid(z: f64) -> f64 {
    if z >= 0.0 {
        1.0 / (1.0 + (-z).exp())
    } else {
        let e = z.exp();
        e / (1.0 + e)
    }
}

impl LogRegModel {
    pub fn decision(&self, row: &[f64]) -> f64 {
        self.bias
            + self
                .weights
                .iter()
                .zip(row)
                .map(|(w, x)| w * x)
                .sum::<f64>()
    }

    pub fn probability(&self, row: &[f64]) -> f64 {
        sigmoid(self.decision(row))
    }

    /// Class 1 iff the decision value is strictly positive.
    pub fn predict(&self, row: &[f64]) -> u8 {
        u8::from(self.decision(row) > 0.0)
    }
}

/// Full-batch gradient descent from zero weights.
pub fn logreg_train(x: &FeatureMatrix, cfg: &LogRegConfig) -> Result<LogRegModel> {
    if !x.has_both_classes() {
        return Err(Error::InvalidInput(
            "logistic regression needs both classes".into(),
        ));
    }
    let n = x.n_rows() as f64;
    let d = x.n_features();
    let mut w = vec![0.0; d];
    let mut b = 0.0;
    for _ in 0..cfg.max_iterations {
        let mut gw = vec![0.0; d];
        let mut gb = 0.0;
        for (r, &y) in x.rows.iter().zip(&x.labels) {
            let z = b + w.iter().zip(r).map(|(wi, xi)| wi * xi).sum::<f64>();
            let err = sigmoid(z) - f64::from(y);
            gb += err;
            for (g, xi) in gw.iter_mut().zip(r) {
                *g += err * xi;
            }
        }
        for (wi, g) in w.iter_mut().zip(&gw) {
            *wi -= cfg.learning_rate * (g + cfg.l2_strength * *wi) / n;
        }
        b -= cfg.learning_rate * gb / n;
    }
    if w.iter().any(|v| !v.is_finite()) || !b.is_finite() {
        return Err(Error::InvalidInput("logistic regression diverged".into()));
    }
    Ok(LogRegModel {
        weights: w,
        bias: b,
        l2_strength: cfg.l2_strength,
        max_iterations: cfg.max_iterations,
    })
}

pub fn logreg_predict(model: &LogRegModel, x: &FeatureMatrix) -> Vec<u8> {
    x.rows.iter().map(|r| model.predict(r)).collect()
}

/// Stored training rows with equal-weight majority voting.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnnModel {
    pub k: usize,
    pub rows: Vec<Vec<f64>>,
    pub labels: Vec<u8>,
}

impl KnnModel {
    pub fn fit(x: &FeatureMatrix, k: usize) -> Result<Self> {
        if k == 0 || k > x.n_rows() {
            return Err(Error::InvalidInput(format!(
                "k = {k} must lie in 1..={} (training size)",
                x.n_rows()
            )));
        }
        Ok(Self {
            k,
            rows: x.rows.clone(),
            labels: x.labels.clone(),
        })
    }
}

/// Majority label among the `k` nearest rows (Euclidean). Equidistant rows
/// are ranked by training index; a tied vote goes to class 0.
pub fn knn_predict(model: &KnnModel, row: &[f64]) -> u8 {
    let mut dist: Vec<(f64, usize)> = model
        .rows
        .iter()
        .enumerate()
        .map(|(i, r)| (r.iter().zip(row).map(|(a, b)| (a - b).powi(2)).sum(), i))
        .collect();
    dist.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
    let ones = dist[..model.k]
        .iter()
        .filter(|(_, i)| model.labels[*i] == 1)
        .count();
    u8::from(2 * ones > model.k)
}
