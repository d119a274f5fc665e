use std::f64::consts::{FRAC_PI_2, PI};

use serde::{Deserialize, Serialize};

use crate::encoding::AngleVector;
use crate::error::{Error, Result};

/// Per-feature min-max map onto `[0, pi]`, clamping outside the fitted range.
/// A constant feature maps to `pi / 2`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AngleScaler {
    pub min: Vec<f64>,
    pub max: Vec<f64>,
}

impl AngleScaler {
    pub fn fit(rows: &[Vec<f64>]) -> Result<Self> {
        let first = rows
            .first()
            .ok_or_else(|| Error::InsufficientData("angle scaler needs at least one row".into()))?;
        let mut min = first.clone();
        let mut max = first.clone();
        for r in rows {
            if r.len() != min.len() {
                return Err(Error::Dimension(format!(
                    "row of {} features, expected {}",
                    r.len(),
                    min.len()
                )));
            }
            for (j, v) in r.iter().enumerate() {
                min[j] = min[j].min(*v);
                max[j] = max[j].max(*v);
            }
        }
        Ok(Self { min, max })
    }

    pub fn n_features(&self) -> usize {
        self.min.len()
    }

    pub fn scale_value(&self, j: usize, v: f64) -> f64 {
        let (lo, hi) = (self.min[j], self.max[j]);
        if hi <= lo {
            return FRAC_PI_2;
        }
        if v <= lo {
            0.0
        } else if v >= hi {
            PI
        } else {
            PI * (v - lo) / (hi - lo)
        }
    }

    pub fn transform(&self, row: &[f64]) -> Result<AngleVector> {
        if row.len() != self.n_features() {
            return Err(Error::Dimension(format!(
                "row has {} features, scaler was fitted on {}",
                row.len(),
                self.n_features()
            )));
        }
        AngleVector::new(
            row.iter()
                .enumerate()
                .map(|(j, &v)| self.scale_value(j, v))
                .collect(),
        )
    }
}
