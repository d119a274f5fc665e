//! Pattern-controlled rotation cascade that packs `2^n - 1` feature angles
//! into `n` qubits, plus its inverse.
//!
//! Qubit `k` (0-based) carries `2^k` rotations, one per control pattern over
//! qubits `0..k`. Patterns are enumerated from all-control down to
//! all-anti-control, reading qubit 0 as the most significant digit: on qubit 2
//! the order is `11, 10, 01, 00` for `(q0, q1)`. Features are consumed in that
//! order, qubit by qubit.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::quantum::{CircuitPlan, Control, GateOp, Stage};

/// Slack allowed on the `[0, pi]` bound for values produced by arithmetic.
const ANGLE_SLACK: f64 = 1e-12;

/// Feature angles in radians, each in `[0, pi]`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct AngleVector(Vec<f64>);

impl AngleVector {
    pub fn new(angles: Vec<f64>) -> Result<Self> {
        if angles.is_empty() {
            return Err(Error::InvalidInput("angle vector is empty".into()));
        }
        if let Some((i, a)) = angles
            .iter()
            .enumerate()
            .find(|(_, a)| !a.is_finite() || **a < -ANGLE_SLACK || **a > PI + ANGLE_SLACK)
        {
            return Err(Error::InvalidInput(format!(
                "angle {i} = {a} is outside [0, pi]"
            )));
        }
        Ok(Self(angles))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    /// Angles padded with zeros up to `2^n - 1` entries.
    pub fn padded(&self, n_qubits: usize) -> Result<Vec<f64>> {
        let slots = (1usize << n_qubits) - 1;
        if self.len() > slots {
            return Err(Error::InvalidInput(format!(
                "{} angles do not fit on {n_qubits} qubits ({slots} slots)",
                self.len()
            )));
        }
        let mut out = self.0.clone();
        out.resize(slots, 0.0);
        Ok(out)
    }
}

/// Smallest `n` with `2^n - 1 >= m`.
pub fn qubits_for_features(m: usize) -> Result<usize> {
    if m == 0 {
        return Err(Error::InvalidInput(
            "at least one feature is required".into(),
        ));
    }
    let mut n = 1;
    while (1usize << n) - 1 < m {
        n += 1;
    }
    Ok(n)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Assignment {
    pub feature: usize,
    pub target: usize,
    pub pattern: Vec<Control>,
}

/// Feature-to-gate layout for a register of `n_qubits`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EncodingPlan {
    pub n_qubits: usize,
    pub assignments: Vec<Assignment>,
}

impl EncodingPlan {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 {
            return Err(Error::InvalidInput(
                "encoding needs at least one qubit".into(),
            ));
        }
        let mut assignments = Vec::with_capacity((1 << n_qubits) - 1);
        for target in 0..n_qubits {
            let patterns = 1usize << target;
            for r in 0..patterns {
                let bits = patterns - 1 - r;
                let pattern = (0..target)
                    .map(|q| {
                        if bits >> (target - 1 - q) & 1 == 1 {
                            Control::on(q)
                        } else {
                            Control::anti(q)
                        }
                    })
                    .collect();
                assignments.push(Assignment {
                    feature: assignments.len(),
                    target,
                    pattern,
                });
            }
        }
        Ok(Self {
            n_qubits,
            assignments,
        })
    }

    pub fn feature_count(&self) -> usize {
        self.assignments.len()
    }

    fn gates(&self, angles: &[f64]) -> Vec<GateOp> {
        self.assignments
            .iter()
            .map(|a| GateOp::ry(a.target, angles[a.feature]).with_controls(a.pattern.clone()))
            .collect()
    }
}

fn register_for(a: &AngleVector) -> Result<(EncodingPlan, Vec<f64>)> {
    let n = qubits_for_features(a.len())?;
    let plan = EncodingPlan::new(n)?;
    let padded = a.padded(n)?;
    Ok((plan, padded))
}

/// Encoding circuit `U(a)` on the smallest register that holds `a`.
pub fn build_u(a: &AngleVector) -> Result<CircuitPlan> {
    let (plan, angles) = register_for(a)?;
    build_u_on(&plan, &angles)
}

/// `U(a)` on an explicit layout; `angles` must already be padded.
pub fn build_u_on(plan: &EncodingPlan, angles: &[f64]) -> Result<CircuitPlan> {
    if angles.len() != plan.feature_count() {
        return Err(Error::Dimension(format!(
            "{} angles for a {}-slot encoding",
            angles.len(),
            plan.feature_count()
        )));
    }
    CircuitPlan::from_ops(plan.n_qubits, Stage::U, plan.gates(angles))
}

/// `U(a)^dagger`: the gates of `U(a)` reversed, each angle negated.
pub fn build_u_dagger(a: &AngleVector) -> Result<CircuitPlan> {
    let (plan, angles) = register_for(a)?;
    build_u_dagger_on(&plan, &angles)
}

pub fn build_u_dagger_on(plan: &EncodingPlan, angles: &[f64]) -> Result<CircuitPlan> {
    let forward = build_u_on(plan, angles)?;
    let ops = forward.ops().iter().rev().map(GateOp::inverse).collect();
    CircuitPlan::from_ops(plan.n_qubits, Stage::UDagger, ops)
}

/// Gate count of the encoding on `n` qubits, `2^n - 1`.
pub fn encoding_gate_count(n: usize) -> usize {
    (1usize << n) - 1
}
