use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{eigh_symmetric, RealMatrix};

use super::FeatureMatrix;

/// Projection onto the leading principal axes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    pub means: Vec<f64>,
    /// `components[j]` is the unit axis of output feature `j`.
    pub components: Vec<Vec<f64>>,
    /// Covariance eigenvalues of the kept axes.
    pub variances: Vec<f64>,
    pub explained_variance_ratio: Vec<f64>,
}

impl PcaModel {
    pub fn transform(&self, row: &[f64]) -> Vec<f64> {
        self.components
            .iter()
            .map(|c| {
                c.iter()
                    .zip(row.iter().zip(&self.means))
                    .map(|(w, (v, m))| w * (v - m))
                    .sum()
            })
            .collect()
    }

    /// Components as a `d_in x d_out` matrix.
    pub fn component_matrix(&self) -> RealMatrix {
        let d_in = self.means.len();
        let d_out = self.components.len();
        let mut m = RealMatrix::zeros(d_in, d_out);
        for (j, c) in self.components.iter().enumerate() {
            for (i, v) in c.iter().enumerate() {
                m[(i, j)] = *v;
            }
        }
        m
    }
}

/// Centers, diagonalizes the sample covariance (`n - 1` divisor) and projects
/// onto the `d_out` largest-variance axes.
pub fn pca_fit_transform(x: &FeatureMatrix, d_out: usize) -> Result<(PcaModel, FeatureMatrix)> {
    let d_in = x.n_features();
    let n = x.n_rows();
    if d_out == 0 || d_out > d_in {
        return Err(Error::InvalidInput(format!(
            "cannot keep {d_out} components of {d_in} features"
        )));
    }
    if n < 2 {
        return Err(Error::InsufficientData(format!(
            "PCA needs at least 2 rows, got {n}"
        )));
    }
    let mut means = vec![0.0; d_in];
    for r in &x.rows {
        for (m, v) in means.iter_mut().zip(r) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n as f64);

    let mut cov = RealMatrix::zeros(d_in, d_in);
    for r in &x.rows {
        let c: Vec<f64> = r.iter().zip(&means).map(|(v, m)| v - m).collect();
        for i in 0..d_in {
            for j in i..d_in {
                cov[(i, j)] += c[i] * c[j];
            }
        }
    }
    for i in 0..d_in {
        for j in i..d_in {
            let v = cov[(i, j)] / (n - 1) as f64;
            cov[(i, j)] = v;
            cov[(j, i)] = v;
        }
    }
    let eig = eigh_symmetric(&cov)?;
    let total: f64 = eig.values.iter().map(|v| v.max(0.0)).sum();
    if total <= 0.0 {
        return Err(Error::InvalidInput("PCA input has zero variance".into()));
    }
    let components: Vec<Vec<f64>> = (0..d_out).map(|j| eig.vectors.column(j)).collect();
    let variances: Vec<f64> = eig.values[..d_out].iter().map(|v| v.max(0.0)).collect();
    let model = PcaModel {
        means,
        explained_variance_ratio: variances.iter().map(|v| v / total).collect(),
        variances,
        components,
    };
    let names = (1..=d_out).map(|i| format!("pc{i}")).collect();
    let rows = x.rows.iter().map(|r| model.transform(r)).collect();
    let mut out = FeatureMatrix::new(names, rows, x.labels.clone())?;
    out.notes = x.notes.clone();
    Ok((model, out.with_note(format!("pca: {d_in} -> {d_out}"))))
}
