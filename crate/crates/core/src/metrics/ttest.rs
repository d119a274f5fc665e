use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::special::regularized_incomplete_beta;

pub const SIGNIFICANCE_LEVEL: f64 = 0.05;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TTestResult {
    /// `mean_a - mean_b` over its standard error; infinite when both samples
    /// are constant with different means.
    #[serde(with = "super::float_text")]
    pub t_statistic: f64,
    pub p_value: f64,
    /// Welch-Satterthwaite value; `n_a + n_b - 2` when both variances vanish.
    pub degrees_of_freedom: f64,
    pub significant: bool,
    pub mean_a: f64,
    pub mean_b: f64,
    pub n_a: usize,
    pub n_b: usize,
}

fn mean_var(xs: &[f64]) -> (f64, f64) {
    let n = xs.len() as f64;
    let mean = xs.iter().sum::<f64>() / n;
    // A constant sample has exactly zero variance even when its mean rounds.
    let var = if xs.iter().all(|&x| x == xs[0]) {
        0.0
    } else {
        xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0)
    };
    (mean, var)
}

/// Two-sided Welch t-test of `a` against `b`.
pub fn welch_t_test(a: &[f64], b: &[f64]) -> Result<TTestResult> {
    if a.len() < 2 || b.len() < 2 {
        return Err(Error::InsufficientData(format!(
            "each sample needs at least 2 values (got {} and {})",
            a.len(),
            b.len()
        )));
    }
    if a.iter().chain(b).any(|v| !v.is_finite()) {
        return Err(Error::InvalidInput(
            "samples contain non-finite values".into(),
        ));
    }
    let (ma, va) = mean_var(a);
    let (mb, vb) = mean_var(b);
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let (sa, sb) = (va / na, vb / nb);
    let se2 = sa + sb;
    let diff = ma - mb;

    let (t, p, df) = if se2 == 0.0 {
        let df = na + nb - 2.0;
        if diff == 0.0 {
            (0.0, 1.0, df)
        } else {
            (diff.signum() * f64::INFINITY, 0.0, df)
        }
    } else {
        let t = diff / se2.sqrt();
        let df = se2 * se2 / (sa * sa / (na - 1.0) + sb * sb / (nb - 1.0));
        let p = regularized_incomplete_beta(df / (df + t * t), 0.5 * df, 0.5).clamp(0.0, 1.0);
        (t, p, df)
    };
    Ok(TTestResult {
        t_statistic: t,
        p_value: p,
        degrees_of_freedom: df,
        significant: p < SIGNIFICANCE_LEVEL,
        mean_a: ma,
        mean_b: mb,
        n_a: a.len(),
        n_b: b.len(),
    })
}
