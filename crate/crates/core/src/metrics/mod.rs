//! Confusion-matrix metrics and the Welch two-sample t-test.

mod special;
mod ttest;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use special::{ln_gamma, regularized_incomplete_beta};
pub use ttest::{welch_t_test, TTestResult, SIGNIFICANCE_LEVEL};

/// Binary confusion counts with class 1 as the positive class.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConfusionMatrix {
    pub tp: usize,
    pub fp: usize,
    #[serde(rename = "fn")]
    pub fn_: usize,
    pub tn: usize,
}

impl ConfusionMatrix {
    pub fn total(&self) -> usize {
        self.tp + self.fp + self.fn_ + self.tn
    }

    pub fn record(&mut self, predicted: u8, actual: u8) {
        match (predicted != 0, actual != 0) {
            (true, true) => self.tp += 1,
            (true, false) => self.fp += 1,
            (false, true) => self.fn_ += 1,
            (false, false) => self.tn += 1,
        }
    }

    pub fn report(&self) -> MetricsReport {
        let ratio = |num: usize, den: usize| {
            if den == 0 {
                (0.0, true)
            } else {
                (num as f64 / den as f64, false)
            }
        };
        let (accuracy, _) = ratio(self.tp + self.tn, self.total());
        let (precision, precision_undefined) = ratio(self.tp, self.tp + self.fp);
        let (recall, recall_undefined) = ratio(self.tp, self.tp + self.fn_);
        let f1_undefined = precision_undefined || recall_undefined || precision + recall == 0.0;
        let f1 = if f1_undefined {
            0.0
        } else {
            2.0 * precision * recall / (precision + recall)
        };
        MetricsReport {
            accuracy,
            precision,
            recall,
            f1,
            precision_undefined,
            recall_undefined,
            f1_undefined,
        }
    }
}

/// Ratios with a zero denominator are reported as 0 and flagged.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MetricsReport {
    pub accuracy: f64,
    pub precision: f64,
    pub recall: f64,
    pub f1: f64,
    pub precision_undefined: bool,
    pub recall_undefined: bool,
    pub f1_undefined: bool,
}

pub fn confusion_and_metrics(
    predictions: &[u8],
    labels: &[u8],
) -> Result<(ConfusionMatrix, MetricsReport)> {
    if predictions.len() != labels.len() {
        return Err(Error::Dimension(format!(
            "{} predictions for {} labels",
            predictions.len(),
            labels.len()
        )));
    }
    if predictions.is_empty() {
        return Err(Error::InvalidInput("no predictions to score".into()));
    }
    let mut cm = ConfusionMatrix::default();
    for (&p, &y) in predictions.iter().zip(labels) {
        cm.record(p, y);
    }
    Ok((cm, cm.report()))
}

/// Serde helpers writing infinities and NaN as the strings `"inf"`,
/// `"-inf"` and `"nan"`.
pub mod float_text {
    use serde::{de, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &f64, s: S) -> Result<S::Ok, S::Error> {
        if v.is_finite() {
            s.serialize_f64(*v)
        } else if v.is_nan() {
            s.serialize_str("nan")
        } else if *v > 0.0 {
            s.serialize_str("inf")
        } else {
            s.serialize_str("-inf")
        }
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<f64, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(f64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(v),
            Repr::Text(t) => match t.as_str() {
                "inf" => Ok(f64::INFINITY),
                "-inf" => Ok(f64::NEG_INFINITY),
                "nan" => Ok(f64::NAN),
                other => Err(de::Error::custom(format!("not a number: `{other}`"))),
            },
        }
    }
}
