//! Derivative-free minimisers with per-iteration traces.
//!
//! An *iteration* is one proposed step: a trust-region or geometry step for
//! COBYLA, one reflect/expand/contract/shrink cycle for Nelder-Mead. Iteration
//! 0 is the initial simplex. Objective evaluations are counted separately.

mod cobyla;
mod linalg;
mod nelder_mead;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use cobyla::cobyla_minimize;
pub use nelder_mead::neldermead_minimize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Cobyla,
    NelderMead,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Cobyla => "cobyla",
            Method::NelderMead => "nelder_mead",
        })
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "cobyla" => Ok(Method::Cobyla),
            "nelder_mead" | "nelder-mead" => Ok(Method::NelderMead),
            _ => Err(Error::InvalidInput(format!("unknown optimizer `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerConfig {
    pub method: Method,
    /// Initial step / trust-region radius.
    pub rho_begin: f64,
    /// Final radius; the run stops once the radius would shrink below it.
    pub rho_end: f64,
    pub max_evaluations: usize,
    /// Cap on iterations after the initial simplex.
    pub iteration_budget: usize,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self {
            method: Method::Cobyla,
            rho_begin: 1.0,
            rho_end: 1e-4,
            max_evaluations: 1000,
            iteration_budget: usize::MAX,
        }
    }
}

impl OptimizerConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.rho_end > 0.0 && self.rho_begin > self.rho_end && self.rho_begin.is_finite()) {
            return Err(Error::InvalidInput(format!(
                "need 0 < rho_end < rho_begin, got rho_begin={} rho_end={}",
                self.rho_begin, self.rho_end
            )));
        }
        if self.max_evaluations == 0 || self.iteration_budget == 0 {
            return Err(Error::InvalidInput(
                "max_evaluations and iteration_budget must be at least 1".into(),
            ));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Termination {
    /// Radius reached `rho_end` (COBYLA) or simplex collapsed below it (Nelder-Mead).
    Converged,
    MaxEvaluations,
    IterationBudget,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TracePoint {
    pub iteration: usize,
    /// Evaluations consumed up to and including this iteration.
    pub evaluations: usize,
    /// Point evaluated in this iteration (the best vertex for iteration 0).
    pub params: Vec<f64>,
    /// Objective at `params`.
    pub value: f64,
    /// Lowest objective seen so far.
    pub best_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OptimizerResult {
    pub best_params: Vec<f64>,
    pub best_value: f64,
    pub evaluations_used: usize,
    pub iterations: usize,
    pub termination: Termination,
    pub trace: Vec<TracePoint>,
}

impl OptimizerResult {
    /// CSV rows `iteration,best_value` for plotting convergence.
    pub fn best_value_series(&self) -> Vec<(usize, f64)> {
        self.trace
            .iter()
            .map(|t| (t.iteration, t.best_value))
            .collect()
    }
}

/// Dispatches on `config.method`.
pub fn minimize<F>(objective: F, x0: &[f64], config: &OptimizerConfig) -> Result<OptimizerResult>
where
    F: FnMut(&[f64]) -> f64,
{
    match config.method {
        Method::Cobyla => cobyla_minimize(objective, x0, config),
        Method::NelderMead => neldermead_minimize(objective, x0, config),
    }
}

/// Evaluation counter that tracks the best point and rejects non-finite values.
pub(crate) struct Evaluator<F> {
    objective: F,
    pub evaluations: usize,
    pub max_evaluations: usize,
    pub best_params: Vec<f64>,
    pub best_value: f64,
}

impl<F: FnMut(&[f64]) -> f64> Evaluator<F> {
    pub fn new(objective: F, max_evaluations: usize) -> Self {
        Self {
            objective,
            evaluations: 0,
            max_evaluations,
            best_params: Vec::new(),
            best_value: f64::INFINITY,
        }
    }

    pub fn exhausted(&self) -> bool {
        self.evaluations >= self.max_evaluations
    }

    pub fn eval(&mut self, x: &[f64]) -> Result<f64> {
        debug_assert!(!self.exhausted());
        self.evaluations += 1;
        let value = (self.objective)(x);
        if !value.is_finite() {
            return Err(Error::NonFiniteObjective {
                evaluation: self.evaluations,
                value,
            });
        }
        if value < self.best_value {
            self.best_value = value;
            self.best_params = x.to_vec();
        }
        Ok(value)
    }

    /// Folds evaluations spent in an unfinished final step into the last
    /// trace point.
    pub fn settle(&self, trace: &mut [TracePoint]) {
        if let Some(last) = trace.last_mut() {
            last.evaluations = self.evaluations;
            last.best_value = self.best_value;
        }
    }

    pub fn record(
        &self,
        trace: &mut Vec<TracePoint>,
        iteration: usize,
        params: &[f64],
        value: f64,
    ) {
        trace.push(TracePoint {
            iteration,
            evaluations: self.evaluations,
            params: params.to_vec(),
            value,
            best_value: self.best_value,
        });
    }
}

pub(crate) fn check_start(x0: &[f64], config: &OptimizerConfig) -> Result<()> {
    config.validate()?;
    if x0.is_empty() {
        return Err(Error::InvalidInput("starting point is empty".into()));
    }
    if x0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidInput(
            "starting point has non-finite entries".into(),
        ));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn config_validation() {
        assert!(OptimizerConfig::default().validate().is_ok());
        let bad = OptimizerConfig {
            rho_end: 2.0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = OptimizerConfig {
            max_evaluations: 0,
            ..OptimizerConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn method_names() {
        assert_eq!("cobyla".parse::<Method>().unwrap(), Method::Cobyla);
        assert_eq!("nelder_mead".parse::<Method>().unwrap(), Method::NelderMead);
        assert!("adam".parse::<Method>().is_err());
        assert_eq!(Method::NelderMead.to_string(), "nelder_mead");
    }
}
