//! Single-qubit Kraus channels and their application to density matrices.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numerics::{pauli, ComplexMatrix, C64, ONE, ZERO};
use crate::quantum::DensityMatrix;

/// Completeness tolerance for `sum E^dagger E = I`.
pub const COMPLETENESS_TOL: f64 = 1e-12;

/// The default sweep grid: `0.00, 0.11, ..., 0.99`.
pub fn strength_grid() -> Vec<f64> {
    (0..10)
        .map(|k| k as f64 * 0.11)
        .map(|p| (p * 100.0).round() / 100.0)
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ChannelKind {
    BitFlip,
    PhaseFlip,
    BitPhaseFlip,
    Depolarizing,
    AmplitudeDamping,
    PhaseDamping,
}

impl ChannelKind {
    pub const ALL: [ChannelKind; 6] = [
        ChannelKind::BitFlip,
        ChannelKind::PhaseFlip,
        ChannelKind::BitPhaseFlip,
        ChannelKind::Depolarizing,
        ChannelKind::AmplitudeDamping,
        ChannelKind::PhaseDamping,
    ];

    pub fn name(self) -> &'static str {
        match self {
            ChannelKind::BitFlip => "bit_flip",
            ChannelKind::PhaseFlip => "phase_flip",
            ChannelKind::BitPhaseFlip => "bit_phase_flip",
            ChannelKind::Depolarizing => "depolarizing",
            ChannelKind::AmplitudeDamping => "amplitude_damping",
            ChannelKind::PhaseDamping => "phase_damping",
        }
    }
}

impl fmt::Display for ChannelKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for ChannelKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        ChannelKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| Error::InvalidInput(format!("unknown noise channel `{s}`")))
    }
}

/// Named channel with strength `p` and its 2x2 Kraus operators.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausChannel {
    kind: ChannelKind,
    strength: f64,
    operators: Vec<[C64; 4]>,
}

fn scaled(m: [C64; 4], s: f64) -> [C64; 4] {
    m.map(|z| z * s)
}

fn real(v: f64) -> C64 {
    C64::new(v, 0.0)
}

/// Builds the Kraus operators of `kind` at strength `p`.
pub fn build_channel(kind: ChannelKind, p: f64) -> Result<KrausChannel> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidInput(format!(
            "noise strength {p} outside [0, 1]"
        )));
    }
    let keep = (1.0 - p).sqrt();
    let flip = p.sqrt();
    let operators = match kind {
        ChannelKind::BitFlip => vec![scaled(pauli::IDENTITY, keep), scaled(pauli::X, flip)],
        ChannelKind::PhaseFlip => vec![scaled(pauli::IDENTITY, keep), scaled(pauli::Z, flip)],
        ChannelKind::BitPhaseFlip => vec![scaled(pauli::IDENTITY, keep), scaled(pauli::Y, flip)],
        ChannelKind::Depolarizing => {
            let quarter = (p / 4.0).sqrt();
            vec![
                scaled(pauli::IDENTITY, (1.0 - 0.75 * p).sqrt()),
                scaled(pauli::Z, quarter),
                scaled(pauli::X, quarter),
                scaled(pauli::Y, quarter),
            ]
        }
        // Decay operator listed first.
        ChannelKind::AmplitudeDamping => vec![
            [ZERO, real(flip), ZERO, ZERO],
            [ONE, ZERO, ZERO, real(keep)],
        ],
        ChannelKind::PhaseDamping => vec![
            scaled(pauli::IDENTITY, keep),
            [real(flip), ZERO, ZERO, ZERO],
            [ZERO, ZERO, ZERO, real(flip)],
        ],
    };
    Ok(KrausChannel {
        kind,
        strength: p,
        operators,
    })
}

impl KrausChannel {
    /// Wraps hand-built operators without checking completeness; see
    /// [`validate_channel`].
    pub fn from_operators(kind: ChannelKind, strength: f64, operators: Vec<[C64; 4]>) -> Self {
        Self {
            kind,
            strength,
            operators,
        }
    }

    pub fn kind(&self) -> ChannelKind {
        self.kind
    }

    pub fn strength(&self) -> f64 {
        self.strength
    }

    pub fn operators(&self) -> &[[C64; 4]] {
        &self.operators
    }

    pub fn operator_matrices(&self) -> Vec<ComplexMatrix> {
        self.operators
            .iter()
            .map(|m| ComplexMatrix::from_2x2(*m))
            .collect()
    }

    /// True for strength exactly zero, where every channel is the identity map.
    pub fn is_identity(&self) -> bool {
        self.strength == 0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChannelReport {
    /// `max |(sum E^dagger E - I)_ij|`.
    pub max_deviation: f64,
    pub passed: bool,
}

pub fn validate_channel(c: &KrausChannel) -> ChannelReport {
    let mut sum = ComplexMatrix::zeros(2, 2);
    for e in c.operator_matrices() {
        let term = e.adjoint().matmul(&e).expect("2x2");
        sum = sum.add(&term).expect("2x2");
    }
    let max_deviation = sum.max_abs_diff(&ComplexMatrix::identity(2));
    ChannelReport {
        max_deviation,
        passed: max_deviation < COMPLETENESS_TOL,
    }
}

/// `rho' = sum_i E_i rho E_i^dagger` with each `E_i` acting on `qubit`.
pub fn apply_channel_qubit(
    rho: &DensityMatrix,
    c: &KrausChannel,
    qubit: usize,
) -> Result<DensityMatrix> {
    let mut out = rho.clone();
    out.apply_local_kraus(c.operators(), qubit)?;
    Ok(out)
}

/// Applies the channel to every qubit in turn, `0..n`.
pub fn apply_channel_stage(rho: &DensityMatrix, c: &KrausChannel) -> DensityMatrix {
    let mut out = rho.clone();
    for q in 0..rho.n_qubits() {
        out.apply_local_kraus(c.operators(), q)
            .expect("qubit index within register");
    }
    out
}
