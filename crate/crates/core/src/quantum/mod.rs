//! Pure-state and density-matrix simulation of circuits made of single-qubit
//! gates with control and anti-control qubits.
//!
//! Qubit `q` is bit `q` of the basis index (qubit 0 is least significant).

mod circuit;
mod density;
mod gate;
mod state;

pub use circuit::{run_circuit, CircuitPlan, Stage, StageMark};
pub use density::{apply_gate_density, state_to_density, DensityMatrix};
pub use gate::{Control, GateKind, GateOp, Polarity};
pub use state::{apply_gate_state, prob_all_zero, StateVector};

/// Calls `f(i, j)` for every basis pair `(i, j = i | 1 << target)` whose
/// control bits satisfy `mask`/`value`, with `i` having the target bit clear.
#[inline]
pub(crate) fn for_each_pair(
    dim: usize,
    target: usize,
    mask: usize,
    value: usize,
    mut f: impl FnMut(usize, usize),
) {
    let bit = 1usize << target;
    for i in 0..dim {
        if i & bit == 0 && i & mask == value {
            f(i, i | bit);
        }
    }
}
