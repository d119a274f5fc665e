use crate::encoding::{build_u_dagger_on, build_u_on, AngleVector, EncodingPlan};
use crate::error::{Error, Result};
use crate::noise::{apply_channel_stage, KrausChannel};
use crate::quantum::{CircuitPlan, DensityMatrix, GateOp, Stage, StateVector};

use super::{Mode, ModelConfig, NoisePlacement, ParamVector};

/// Gates of one PQC block: RY layer, RZ layer, CX chain `i -> i+1`, RY layer.
fn pqc_ops(params: &[f64], n: usize) -> Result<Vec<GateOp>> {
    if params.len() != 3 * n {
        return Err(Error::InvalidInput(format!(
            "a {n}-qubit PQC takes {} angles, got {}",
            3 * n,
            params.len()
        )));
    }
    let mut ops = Vec::with_capacity(4 * n - 1);
    ops.extend((0..n).map(|q| GateOp::ry(q, params[q])));
    ops.extend((0..n).map(|q| GateOp::rz(q, params[n + q])));
    ops.extend((0..n.saturating_sub(1)).map(|q| GateOp::cx(q, q + 1)));
    ops.extend((0..n).map(|q| GateOp::ry(q, params[2 * n + q])));
    Ok(ops)
}

pub fn build_pqc(params: &[f64], n_qubits: usize) -> Result<CircuitPlan> {
    build_pqc_stage(params, n_qubits, Stage::PqcA)
}

pub fn build_pqc_stage(params: &[f64], n_qubits: usize, stage: Stage) -> Result<CircuitPlan> {
    CircuitPlan::from_ops(n_qubits, stage, pqc_ops(params, n_qubits)?)
}

fn padded(a: &AngleVector, n: usize) -> Result<Vec<f64>> {
    a.padded(n)
}

/// Stage-marked circuit for the configured mode. `centroid` is ignored in
/// variational_only mode.
pub fn assemble_circuit(
    test: &AngleVector,
    centroid: &AngleVector,
    params: &ParamVector,
    config: &ModelConfig,
) -> Result<CircuitPlan> {
    config.validate()?;
    if test.len() != centroid.len() {
        return Err(Error::Dimension(format!(
            "test has {} angles, centroid has {}",
            test.len(),
            centroid.len()
        )));
    }
    let n = config.n_qubits;
    let plan = EncodingPlan::new(n)?;
    let (a, b) = params.blocks(config)?;
    let mut circuit = build_u_on(&plan, &padded(test, n)?)?;
    if let Some(a) = a {
        circuit.push_stage(Stage::PqcA, pqc_ops(a, n)?)?;
    }
    if config.mode != Mode::VariationalOnly {
        circuit.append(build_u_dagger_on(&plan, &padded(centroid, n)?)?)?;
    }
    if let Some(b) = b {
        circuit.push_stage(Stage::PqcB, pqc_ops(b, n)?)?;
    }
    Ok(circuit)
}

/// The mode's readout: `sqrt(P(all zero))` for full and uu_only,
/// `P(qubit 0 = 0)` for variational_only. Noise at strength zero, or none,
/// uses the pure-state path.
pub fn score(
    test: &AngleVector,
    centroid: &AngleVector,
    params: &ParamVector,
    config: &ModelConfig,
    noise: Option<&KrausChannel>,
) -> Result<f64> {
    let circuit = assemble_circuit(test, centroid, params, config)?;
    run_scored(&circuit, config, noise)
}

pub(crate) fn run_scored(
    circuit: &CircuitPlan,
    config: &ModelConfig,
    noise: Option<&KrausChannel>,
) -> Result<f64> {
    match noise.filter(|c| !c.is_identity()) {
        None => {
            let mut s = StateVector::zero(circuit.n_qubits());
            s.apply_all(circuit.ops())?;
            readout_pure(&s, config.mode)
        }
        Some(channel) => {
            let rho = run_noisy(circuit, channel, config.noise_placement)?;
            match config.mode {
                Mode::VariationalOnly => rho.prob_qubit_zero(0),
                _ => Ok(rho.prob_all_zero().max(0.0).sqrt()),
            }
        }
    }
}

pub(crate) fn readout_pure(s: &StateVector, mode: Mode) -> Result<f64> {
    match mode {
        Mode::VariationalOnly => s.prob_qubit_zero(0),
        _ => Ok(s.amplitudes()[0].norm()),
    }
}

pub(crate) fn run_noisy(
    circuit: &CircuitPlan,
    channel: &KrausChannel,
    placement: NoisePlacement,
) -> Result<DensityMatrix> {
    let mut rho = DensityMatrix::zero(circuit.n_qubits());
    for (_, ops) in circuit.stage_ops() {
        for op in ops {
            rho.apply(op)?;
            if placement == NoisePlacement::PerGate {
                rho.apply_local_kraus(channel.operators(), op.target)?;
                for c in &op.controls {
                    rho.apply_local_kraus(channel.operators(), c.qubit)?;
                }
            }
        }
        if placement == NoisePlacement::PerStage {
            rho = apply_channel_stage(&rho, channel);
        }
    }
    Ok(rho)
}
