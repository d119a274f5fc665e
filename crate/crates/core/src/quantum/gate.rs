use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{pauli, ComplexMatrix, C64, ZERO};

/// Whether a control qubit fires on `|1>` (control) or `|0>` (anti-control).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Polarity {
    Control,
    AntiControl,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    pub polarity: Polarity,
}

impl Control {
    pub fn on(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::Control,
        }
    }

    pub fn anti(qubit: usize) -> Self {
        Self {
            qubit,
            polarity: Polarity::AntiControl,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum GateKind {
    /// `[[cos t/2, -sin t/2], [sin t/2, cos t/2]]`
    Ry(f64),
    /// `diag(e^{-i t/2}, e^{i t/2})`
    Rz(f64),
    /// Pauli X; with one control this is CX.
    X,
    /// Arbitrary 2x2 matrix in row-major order. Unitarity is the caller's job.
    Unitary([C64; 4]),
}

/// A single-qubit gate with an arbitrary set of (anti-)controls.
#[derive(Debug, Clone, PartialEq)]
pub struct GateOp {
    pub kind: GateKind,
    pub target: usize,
    pub controls: Vec<Control>,
}

impl GateOp {
    pub fn new(kind: GateKind, target: usize, controls: Vec<Control>) -> Self {
        Self {
            kind,
            target,
            controls,
        }
    }

    pub fn ry(target: usize, angle: f64) -> Self {
        Self::new(GateKind::Ry(angle), target, Vec::new())
    }

    pub fn rz(target: usize, angle: f64) -> Self {
        Self::new(GateKind::Rz(angle), target, Vec::new())
    }

    pub fn x(target: usize) -> Self {
        Self::new(GateKind::X, target, Vec::new())
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Self::new(GateKind::X, target, vec![Control::on(control)])
    }

    pub fn with_controls(mut self, controls: Vec<Control>) -> Self {
        self.controls = controls;
        self
    }

    /// The 2x2 matrix acting on the target, row-major.
    pub fn matrix(&self) -> [C64; 4] {
        match self.kind {
            GateKind::Ry(t) => {
                let (s, c) = (0.5 * t).sin_cos();
                [
                    C64::new(c, 0.0),
                    C64::new(-s, 0.0),
                    C64::new(s, 0.0),
                    C64::new(c, 0.0),
                ]
            }
            GateKind::Rz(t) => {
                let half = 0.5 * t;
                [
                    C64::from_polar(1.0, -half),
                    ZERO,
                    ZERO,
                    C64::from_polar(1.0, half),
                ]
            }
            GateKind::X => pauli::X,
            GateKind::Unitary(m) => m,
        }
    }

    /// The inverse gate with the same controls: rotation angles negated,
    /// X unchanged, generic matrices conjugate-transposed.
    pub fn inverse(&self) -> Self {
        let kind = match self.kind {
            GateKind::Ry(t) => GateKind::Ry(-t),
            GateKind::Rz(t) => GateKind::Rz(-t),
            GateKind::X => GateKind::X,
            GateKind::Unitary(m) => {
                GateKind::Unitary([m[0].conj(), m[2].conj(), m[1].conj(), m[3].conj()])
            }
        };
        Self::new(kind, self.target, self.controls.clone())
    }

    /// Checks qubit indices against the register size.
    pub fn validate(&self, n_qubits: usize) -> Result<()> {
        let check = |q: usize| {
            if q >= n_qubits {
                Err(Error::QubitIndex { index: q, n_qubits })
            } else {
                Ok(())
            }
        };
        check(self.target)?;
        for (k, c) in self.controls.iter().enumerate() {
            check(c.qubit)?;
            if c.qubit == self.target {
                return Err(Error::InvalidInput(format!(
                    "qubit {} is both target and control",
                    c.qubit
                )));
            }
            if self.controls[..k].iter().any(|o| o.qubit == c.qubit) {
                return Err(Error::InvalidInput(format!(
                    "qubit {} listed twice as a control",
                    c.qubit
                )));
            }
        }
        if let GateKind::Ry(t) | GateKind::Rz(t) = self.kind {
            if !t.is_finite() {
                return Err(Error::InvalidInput(format!(
                    "non-finite rotation angle {t}"
                )));
            }
        }
        Ok(())
    }

    /// `(mask, value)` such that the gate fires on basis index `i` iff
    /// `i & mask == value`.
    pub fn control_mask(&self) -> (usize, usize) {
        self.controls.iter().fold((0, 0), |(mask, value), c| {
            let bit = 1 << c.qubit;
            match c.polarity {
                Polarity::Control => (mask | bit, value | bit),
                Polarity::AntiControl => (mask | bit, value),
            }
        })
    }

    /// Full `2^n x 2^n` matrix, built by brute force over basis states.
    pub fn dense_matrix(&self, n_qubits: usize) -> Result<ComplexMatrix> {
        self.validate(n_qubits)?;
        let dim = 1 << n_qubits;
        let m = self.matrix();
        let (mask, value) = self.control_mask();
        let mut out = ComplexMatrix::identity(dim);
        super::for_each_pair(dim, self.target, mask, value, |i, j| {
            out[(i, i)] = m[0];
            out[(i, j)] = m[1];
            out[(j, i)] = m[2];
            out[(j, j)] = m[3];
        });
        Ok(out)
    }
}

impl fmt::Display for GateOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GateKind::Ry(t) => write!(f, "RY({t:.6})")?,
            GateKind::Rz(t) => write!(f, "RZ({t:.6})")?,
            GateKind::X => write!(f, "X")?,
            GateKind::Unitary(_) => write!(f, "U")?,
        }
        write!(f, " q{}", self.target)?;
        for c in &self.controls {
            let tag = match c.polarity {
                Polarity::Control => "c",
                Polarity::AntiControl => "a",
            };
            write!(f, " {tag}{}", c.qubit)?;
        }
        Ok(())
    }
}
