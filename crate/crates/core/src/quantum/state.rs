use crate::error::{Error, Result};
use crate::numerics::{ComplexVector, C64, ONE, ZERO};

use super::GateOp;

const NORM_TOL: f64 = 1e-10;

/// Normalised pure state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n_qubits: usize,
    amplitudes: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n_qubits: usize) -> Self {
        let mut amplitudes = vec![ZERO; 1 << n_qubits];
        amplitudes[0] = ONE;
        Self {
            n_qubits,
            amplitudes,
        }
    }

    /// Computational basis state `|index>`.
    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        let dim = 1usize << n_qubits;
        if index >= dim {
            return Err(Error::InvalidInput(format!(
                "basis index {index} out of range for {n_qubits} qubits"
            )));
        }
        let mut amplitudes = vec![ZERO; dim];
        amplitudes[index] = ONE;
        Ok(Self {
            n_qubits,
            amplitudes,
        })
    }

    /// Wraps amplitudes, requiring a power-of-two length and unit norm.
    pub fn from_amplitudes(amplitudes: Vec<C64>) -> Result<Self> {
        let dim = amplitudes.len();
        if dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "state length {dim} is not a power of two"
            )));
        }
        let norm: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidInput(format!(
                "state norm^2 is {norm}, not 1"
            )));
        }
        Ok(Self {
            n_qubits: dim.trailing_zeros() as usize,
            amplitudes,
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amplitudes
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner(&self, other: &Self) -> Result<C64> {
        self.to_vector().dot(&other.to_vector())
    }

    pub fn to_vector(&self) -> ComplexVector {
        ComplexVector::new(self.amplitudes.clone())
    }

    /// In-place gate application.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let m = gate.matrix();
        let (mask, value) = gate.control_mask();
        let amps = &mut self.amplitudes;
        super::for_each_pair(amps.len(), gate.target, mask, value, |i, j| {
            let (a, b) = (amps[i], amps[j]);
            amps[i] = m[0] * a + m[1] * b;
            amps[j] = m[2] * a + m[3] * b;
        });
        Ok(())
    }

    /// Applies a sequence of gates in order.
    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Probability that measuring `qubit` yields 0.
    pub fn prob_qubit_zero(&self, qubit: usize) -> Result<f64> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let bit = 1 << qubit;
        Ok(self
            .amplitudes
            .iter()
            .enumerate()
            .filter(|(i, _)| i & bit == 0)
            .map(|(_, a)| a.norm_sqr())
            .sum::<f64>()
            .clamp(0.0, 1.0))
    }
}

/// Returns the state after `gate`; the input is left untouched.
pub fn apply_gate_state(s: &StateVector, gate: &GateOp) -> Result<StateVector> {
    let mut out = s.clone();
    out.apply(gate)?;
    Ok(out)
}

/// `|a_0|^2`, the probability of reading out all zeros.
pub fn prob_all_zero(s: &StateVector) -> f64 {
    s.amplitudes[0].norm_sqr().clamp(0.0, 1.0)
}
