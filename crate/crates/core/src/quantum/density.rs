use crate::error::{Error, Result};
use crate::numerics::{eigh_symmetric, ComplexMatrix, C64, ZERO};

use super::{for_each_pair, GateOp, StateVector};

/// Mixed state of `n_qubits` qubits.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n_qubits: usize,
    rho: ComplexMatrix,
}

impl DensityMatrix {
    /// `|0...0><0...0|`.
    pub fn zero(n_qubits: usize) -> Self {
        state_to_density(&StateVector::zero(n_qubits))
    }

    /// `I / 2^n`.
    pub fn maximally_mixed(n_qubits: usize) -> Self {
        let dim = 1 << n_qubits;
        Self {
            n_qubits,
            rho: ComplexMatrix::identity(dim).scale(C64::new(1.0 / dim as f64, 0.0)),
        }
    }

    /// Wraps a matrix after checking shape, trace and Hermiticity.
    pub fn from_matrix(rho: ComplexMatrix) -> Result<Self> {
        let dim = rho.rows();
        if !rho.is_square() || dim == 0 || !dim.is_power_of_two() {
            return Err(Error::Dimension(format!(
                "density matrix must be square with power-of-two size, got {}x{}",
                rho.rows(),
                rho.cols()
            )));
        }
        let dm = Self {
            n_qubits: dim.trailing_zeros() as usize,
            rho,
        };
        if (dm.trace() - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidInput(format!(
                "trace {} is not 1",
                dm.trace()
            )));
        }
        if dm.rho.hermitian_deviation() > 1e-10 {
            return Err(Error::InvalidInput("matrix is not Hermitian".into()));
        }
        Ok(dm)
    }

    pub fn n_qubits(&self) -> usize {
        self.n_qubits
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.rho
    }

    /// Real part of the trace.
    pub fn trace(&self) -> f64 {
        self.rho.trace().re
    }

    pub fn hermitian_deviation(&self) -> f64 {
        self.rho.hermitian_deviation()
    }

    /// Smallest eigenvalue, from the real symmetric embedding of `rho`.
    pub fn min_eigenvalue(&self) -> Result<f64> {
        let e = eigh_symmetric(&self.rho.hermitian_real_embedding())?;
        Ok(*e.values.last().expect("non-empty spectrum"))
    }

    /// `<0...0| rho |0...0>`.
    pub fn prob_all_zero(&self) -> f64 {
        self.rho[(0, 0)].re.clamp(0.0, 1.0)
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
        Ok((0..self.rho.rows())
            .filter(|i| i & bit == 0)
            .map(|i| self.rho[(i, i)].re)
            .sum::<f64>()
            .clamp(0.0, 1.0))
    }

    /// `E rho E^dagger` where `E` is a 2x2 matrix on `target`, extended by
    /// identity elsewhere and gated by the control `mask`/`value`.
    pub fn conjugated(
        &self,
        m: &[C64; 4],
        target: usize,
        mask: usize,
        value: usize,
    ) -> ComplexMatrix {
        let dim = self.rho.rows();
        let mut out = self.rho.clone();
        let data = out.as_mut_slice();
        // Left multiplication acts on rows.
        for_each_pair(dim, target, mask, value, |i, j| {
            for c in 0..dim {
                let (a, b) = (data[i * dim + c], data[j * dim + c]);
                data[i * dim + c] = m[0] * a + m[1] * b;
                data[j * dim + c] = m[2] * a + m[3] * b;
            }
        });
        // Right multiplication by E^dagger acts on columns.
        let (c00, c01, c10, c11) = (m[0].conj(), m[1].conj(), m[2].conj(), m[3].conj());
        for_each_pair(dim, target, mask, value, |i, j| {
            for r in 0..dim {
                let (a, b) = (data[r * dim + i], data[r * dim + j]);
                data[r * dim + i] = a * c00 + b * c01;
                data[r * dim + j] = a * c10 + b * c11;
            }
        });
        out
    }

    /// In-place unitary conjugation `rho <- G rho G^dagger`.
    pub fn apply(&mut self, gate: &GateOp) -> Result<()> {
        gate.validate(self.n_qubits)?;
        let (mask, value) = gate.control_mask();
        self.rho = self.conjugated(&gate.matrix(), gate.target, mask, value);
        Ok(())
    }

    pub fn apply_all<'a>(&mut self, gates: impl IntoIterator<Item = &'a GateOp>) -> Result<()> {
        for g in gates {
            self.apply(g)?;
        }
        Ok(())
    }

    /// Replaces `rho` by `sum_k E_k rho E_k^dagger` for 2x2 operators on `qubit`.
    pub fn apply_local_kraus(&mut self, operators: &[[C64; 4]], qubit: usize) -> Result<()> {
        if qubit >= self.n_qubits {
            return Err(Error::QubitIndex {
                index: qubit,
                n_qubits: self.n_qubits,
            });
        }
        let dim = self.rho.rows();
        let mut acc = ComplexMatrix::zeros(dim, dim);
        for e in operators {
            let term = self.conjugated(e, qubit, 0, 0);
            for (a, t) in acc.as_mut_slice().iter_mut().zip(term.as_slice()) {
                *a += t;
            }
        }
        self.rho = acc;
        Ok(())
    }
}

/// `|s><s|`.
pub fn state_to_density(s: &StateVector) -> DensityMatrix {
    let amps = s.amplitudes();
    let dim = amps.len();
    let mut data = vec![ZERO; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            data[i * dim + j] = amps[i] * amps[j].conj();
        }
    }
    DensityMatrix {
        n_qubits: s.n_qubits(),
        rho: ComplexMatrix::from_vec(dim, dim, data).expect("square by construction"),
    }
}

/// Returns `G rho G^dagger`; the input is left untouched.
pub fn apply_gate_density(rho: &DensityMatrix, gate: &GateOp) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply(gate)?;
    Ok(out)
}
