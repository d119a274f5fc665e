use std::ops::Range;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

use super::{GateOp, StateVector};

/// Named sections of the classifier circuit. Noise may be inserted at the
/// end of each stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Stage {
    /// Test-point encoding.
    U,
    /// First variational block.
    PqcA,
    /// Inverse centroid encoding.
    UDagger,
    /// Second variational block.
    PqcB,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StageMark {
    pub stage: Stage,
    pub range: Range<usize>,
}

/// Ordered gate list with contiguous stage boundaries.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct CircuitPlan {
    n_qubits: usize,
    ops: Vec<GateOp>,
    stages: Vec<StageMark>,
}

impl CircuitPlan {
    pub fn new(n_qubits: usize) -> Self {
        Self {
            n_qubits,
            ops: Vec::new(),
            stages: Vec::new(),
        }
    }

    /// Single-stage plan built from a gate list.
    pub fn from_ops(n_qubits: usize, stage: Stage, ops: Vec<GateOp>) -> Result<Self> {
        let mut plan = Self::new(n_qubits);
        plan.push_stage(stage, ops)?;
        Ok(plan)
    }

    /// Appends a stage after validating every gate.
    pub fn push_stage(&mut self, stage: Stage, ops: Vec<GateOp>) -> Result<()> {
        for op in &ops {
            op.validate(self.n_qubits)?;
        }
        let start = self.ops.len();
        self.ops.extend(ops);
        self.stages.push(StageMark {
            stage,
            range: start..self.ops.len(),
        });
        Ok(())
    }

    /// Appends every stage of `other`, keeping its labels.
    pub fn append(&mut self, other: CircuitPlan) -> Result<()> {
        if other.n_qubits != self.n_qubits {
            return Err(Error::Dimension(format!(
                "cannot append {}-qubit plan to {}-qubit plan",
                other.n_qubits, self.n_qubits
            )));
        }
        let offset = self.ops.len();
        self.ops.extend(other.ops);
        self.stages
            .extend(other.stages.into_iter().map(|m| StageMark {
                stage: m.stage,
                range: m.range.start + offset..m.range.end + offset,
            }));
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn ops(&self) -> &[GateOp] {
        &self.ops
    }

    pub fn stages(&self) -> &[StageMark] {
        &self.stages
    }

    pub fn len(&self) -> usize {
        self.ops.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ops.is_empty()
    }

    /// Gates of each stage, in order.
    pub fn stage_ops(&self) -> impl Iterator<Item = (Stage, &[GateOp])> {
        self.stages
            .iter()
            .map(|m| (m.stage, &self.ops[m.range.clone()]))
    }
}

/// Runs every gate of `plan` on a copy of `initial`.
pub fn run_circuit(plan: &CircuitPlan, initial: &StateVector) -> Result<StateVector> {
    if plan.n_qubits() != initial.n_qubits() {
        return Err(Error::Dimension(format!(
            "{}-qubit plan run on {}-qubit state",
            plan.n_qubits(),
            initial.n_qubits()
        )));
    }
    let mut s = initial.clone();
    s.apply_all(plan.ops())?;
    Ok(s)
}
