//! Standardization, SMOTE oversampling and stratified row sampling.

use rand::seq::index::sample;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seeds::rng_from_seed;

use super::FeatureMatrix;

/// Column means and population standard deviations.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Standardizer {
    pub means: Vec<f64>,
    pub stds: Vec<f64>,
}

impl Standardizer {
    /// Zero-variance columns are only centered.
    pub fn apply(&self, row: &[f64]) -> Vec<f64> {
        row.iter()
            .zip(self.means.iter().zip(&self.stds))
            .map(|(v, (m, s))| if *s > 0.0 { (v - m) / s } else { v - m })
            .collect()
    }
}

pub fn standardize(x: &FeatureMatrix) -> Result<(Standardizer, FeatureMatrix)> {
    if x.is_empty() {
        return Err(Error::InsufficientData(
            "cannot standardize an empty table".into(),
        ));
    }
    let n = x.n_rows() as f64;
    let d = x.n_features();
    let mut means = vec![0.0; d];
    for r in &x.rows {
        for (m, v) in means.iter_mut().zip(r) {
            *m += v;
        }
    }
    means.iter_mut().for_each(|m| *m /= n);
    let mut stds = vec![0.0; d];
    for r in &x.rows {
        for ((s, v), m) in stds.iter_mut().zip(r).zip(&means) {
            *s += (v - m).powi(2);
        }
    }
    stds.iter_mut().for_each(|s| *s = (*s / n).sqrt());
    let st = Standardizer { means, stds };
    let mut out = x.clone();
    out.rows = x.rows.iter().map(|r| st.apply(r)).collect();
    Ok((st, out.with_note("standardize")))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SmoteConfig {
    pub k_neighbors: usize,
    /// Minority rows after balancing; defaults to the majority count.
    pub target_count: Option<usize>,
    pub seed: u64,
}

impl Default for SmoteConfig {
    fn default() -> Self {
        Self {
            k_neighbors: 5,
            target_count: None,
            seed: 0,
        }
    }
}

/// Where a synthetic row came from: `source + lambda (neighbor - source)`,
/// indices into the input table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SyntheticOrigin {
    pub row: usize,
    pub source: usize,
    pub neighbor: usize,
    pub lambda: f64,
}

fn sq_dist(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).powi(2)).sum()
}

/// Oversamples the minority class until both classes have equal counts.
/// Input rows are kept verbatim and first; synthetic rows are appended.
pub fn smote_balance(
    x: &FeatureMatrix,
    cfg: &SmoteConfig,
) -> Result<(FeatureMatrix, Vec<SyntheticOrigin>)> {
    let counts = x.class_counts();
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::InvalidInput(
            "SMOTE needs both classes present".into(),
        ));
    }
    if cfg.k_neighbors == 0 {
        return Err(Error::InvalidInput("SMOTE needs k_neighbors >= 1".into()));
    }
    let minority: u8 = if counts[1] < counts[0] { 1 } else { 0 };
    let target = cfg.target_count.unwrap_or(counts[0].max(counts[1]));
    let have = counts[minority as usize];
    if have >= target {
        return Ok((x.clone().with_note("smote: already balanced"), Vec::new()));
    }
    if have < cfg.k_neighbors + 1 {
        return Err(Error::InsufficientData(format!(
            "minority class has {have} rows; SMOTE with k={} needs at least {}",
            cfg.k_neighbors,
            cfg.k_neighbors + 1
        )));
    }
    let members: Vec<usize> = (0..x.n_rows())
        .filter(|&i| x.labels[i] == minority)
        .collect();
    let neighbors: Vec<Vec<usize>> = members
        .iter()
        .map(|&i| {
            let mut others: Vec<(f64, usize)> = members
                .iter()
                .filter(|&&j| j != i)
                .map(|&j| (sq_dist(&x.rows[i], &x.rows[j]), j))
                .collect();
            others.sort_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)));
            others.truncate(cfg.k_neighbors);
            others.into_iter().map(|(_, j)| j).collect()
        })
        .collect();

    let mut rng = rng_from_seed(cfg.seed);
    let mut out = x.clone();
    let mut origins = Vec::with_capacity(target - have);
    for _ in have..target {
        let m = rng.gen_range(0..members.len());
        let source = members[m];
        let neighbor = neighbors[m][rng.gen_range(0..neighbors[m].len())];
        let lambda: f64 = rng.gen();
        let row: Vec<f64> = x.rows[source]
            .iter()
            .zip(&x.rows[neighbor])
            .map(|(a, b)| a + lambda * (b - a))
            .collect();
        origins.push(SyntheticOrigin {
            row: out.rows.len(),
            source,
            neighbor,
            lambda,
        });
        out.rows.push(row);
        out.labels.push(minority);
    }
    let note = format!(
        "smote: k={} added {} rows of class {minority}",
        cfg.k_neighbors,
        origins.len()
    );
    Ok((out.with_note(note), origins))
}

/// Per-class row counts summing to `n`, proportional to `counts`
/// (largest-remainder rounding, ties to class 0).
fn stratum_sizes(counts: [usize; 2], n: usize) -> [usize; 2] {
    let total = (counts[0] + counts[1]) as f64;
    let exact = [
        n as f64 * counts[0] as f64 / total,
        n as f64 * counts[1] as f64 / total,
    ];
    let mut sizes = [exact[0].floor() as usize, exact[1].floor() as usize];
    if sizes[0] + sizes[1] < n {
        let c = if exact[1] - exact[1].floor() > exact[0] - exact[0].floor() {
            1
        } else {
            0
        };
        sizes[c] += 1;
    }
    sizes
}

fn pick_per_class(x: &FeatureMatrix, sizes: [usize; 2], seed: u64) -> (Vec<usize>, Vec<usize>) {
    let mut rng = rng_from_seed(seed);
    let mut chosen = Vec::new();
    let mut rest = Vec::new();
    for class in [0u8, 1] {
        let idx: Vec<usize> = (0..x.n_rows()).filter(|&i| x.labels[i] == class).collect();
        let take = sizes[class as usize];
        let mut picked = vec![false; idx.len()];
        for p in sample(&mut rng, idx.len(), take) {
            picked[p] = true;
        }
        for (k, &i) in idx.iter().enumerate() {
            if picked[k] {
                chosen.push(i);
            } else {
                rest.push(i);
            }
        }
    }
    chosen.sort_unstable();
    rest.sort_unstable();
    (chosen, rest)
}

/// `n` rows without replacement, class proportions preserved; output keeps
/// input order.
pub fn stratified_subsample(x: &FeatureMatrix, n: usize, seed: u64) -> Result<FeatureMatrix> {
    if x.n_rows() < n {
        return Err(Error::InsufficientData(format!(
            "requested {n} rows but only {} are available",
            x.n_rows()
        )));
    }
    if n == 0 {
        return Err(Error::InvalidInput(
            "subsample size must be positive".into(),
        ));
    }
    let sizes = stratum_sizes(x.class_counts(), n);
    let (chosen, _) = pick_per_class(x, sizes, seed);
    Ok(x.select(&chosen)
        .with_note(format!("stratified subsample: {n} rows")))
}

/// Stratified train/test split holding out `test_fraction` of each class.
pub fn stratified_split(
    x: &FeatureMatrix,
    test_fraction: f64,
    seed: u64,
) -> Result<(FeatureMatrix, FeatureMatrix)> {
    if !(test_fraction > 0.0 && test_fraction < 1.0) {
        return Err(Error::InvalidInput(format!(
            "holdout fraction must lie in (0, 1), got {test_fraction}"
        )));
    }
    let counts = x.class_counts();
    let sizes = [
        (counts[0] as f64 * test_fraction).round() as usize,
        (counts[1] as f64 * test_fraction).round() as usize,
    ];
    let (test, train) = pick_per_class(x, sizes, seed);
    if train.is_empty() || test.is_empty() {
        return Err(Error::InsufficientData(format!(
            "holdout fraction {test_fraction} leaves an empty side for {} rows",
            x.n_rows()
        )));
    }
    let note = format!("holdout split: {} train / {} test", train.len(), test.len());
    Ok((
        x.select(&train).with_note(note.clone()),
        x.select(&test).with_note(note),
    ))
}
