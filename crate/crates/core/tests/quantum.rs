mod common;

use common::*;
use proptest::prelude::*;
use qfeature_core::noise::{apply_channel_stage, build_channel, ChannelKind};
use qfeature_core::numerics::ComplexMatrix;
use qfeature_core::quantum::{
    prob_all_zero, run_circuit, state_to_density, CircuitPlan, DensityMatrix, GateOp, Stage,
    StateVector,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn random_circuits_match_dense_unitary() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for trial in 0..200 {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(1..15);
        let ops = random_circuit(&mut rng, n, len);
        let psi0 = random_state(&mut rng, n);
        let want = apply_dense(&circuit_unitary(&ops, n), &psi0);
        let mut s = StateVector::from_amplitudes(psi0.clone()).unwrap();
        s.apply_all(&ops).unwrap();
        let err = s
            .amplitudes()
            .iter()
            .zip(&want)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12, "trial {trial}: {err}");
    }
}

#[test]
fn dense_matrix_of_gate_matches_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    for _ in 0..100 {
        let n = rng.gen_range(1..=4);
        let g = random_gate(&mut rng, n);
        let got = to_rows(&g.dense_matrix(n).unwrap());
        assert!(max_diff(&got, &dense_gate(&g, n)) < 1e-14);
    }
}

#[test]
fn density_path_matches_unitary_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let len = rng.gen_range(1..12);
        let ops = random_circuit(&mut rng, n, len);
        let rho = random_density(&mut rng, n);
        let u = circuit_unitary(&ops, n);
        let want = matmul(&matmul(&u, &to_rows(rho.matrix())), &adjoint(&u));
        let mut got = rho.clone();
        got.apply_all(&ops).unwrap();
        assert!(max_diff(&to_rows(got.matrix()), &want) < 1e-12);
    }
}

#[test]
fn pure_and_density_paths_agree() {
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..50 {
        let n = rng.gen_range(1..=4);
        let ops = random_circuit(&mut rng, n, 10);
        let mut s = StateVector::zero(n);
        s.apply_all(&ops).unwrap();
        let mut rho = DensityMatrix::zero(n);
        rho.apply_all(&ops).unwrap();
        assert!((rho.prob_all_zero() - prob_all_zero(&s)).abs() < 1e-12);
        for q in 0..n {
            assert!(
                (rho.prob_qubit_zero(q).unwrap() - s.prob_qubit_zero(q).unwrap()).abs() < 1e-12
            );
        }
        assert!(rho.matrix().max_abs_diff(state_to_density(&s).matrix()) < 1e-12);
    }
}

#[test]
fn zero_strength_channels_leave_pure_result_unchanged() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    let n = 3;
    let ops = random_circuit(&mut rng, n, 12);
    let mut s = StateVector::zero(n);
    s.apply_all(&ops).unwrap();
    for kind in ChannelKind::ALL {
        let ch = build_channel(kind, 0.0).unwrap();
        let mut rho = DensityMatrix::zero(n);
        for g in &ops {
            rho.apply(g).unwrap();
            rho = apply_channel_stage(&rho, &ch);
        }
        assert!(
            (rho.prob_all_zero() - prob_all_zero(&s)).abs() < 1e-12,
            "{kind:?}"
        );
    }
}

#[test]
fn circuit_plan_runs_gates_in_order() {
    let ops = vec![GateOp::x(0), GateOp::cx(0, 1)];
    let plan = CircuitPlan::from_ops(2, Stage::PqcA, ops).unwrap();
    let out = run_circuit(&plan, &StateVector::zero(2)).unwrap();
    assert!((out.amplitudes()[3].re - 1.0).abs() < 1e-15);
}

#[test]
fn anti_control_fires_on_zero() {
    use qfeature_core::quantum::Control;
    let g = GateOp::x(1).with_controls(vec![Control::anti(0)]);
    let mut s = StateVector::zero(2);
    s.apply(&g).unwrap();
    // |00> -> |10> in little-endian: index 2.
    assert!((s.amplitudes()[2].re - 1.0).abs() < 1e-15);
    let mut t = StateVector::basis(2, 1).unwrap();
    t.apply(&g).unwrap();
    assert!((t.amplitudes()[1].re - 1.0).abs() < 1e-15);
}

#[test]
fn out_of_range_qubit_is_rejected() {
    let mut s = StateVector::zero(2);
    assert!(s.apply(&GateOp::ry(2, 0.1)).is_err());
    let mut rho = DensityMatrix::zero(2);
    assert!(rho.apply(&GateOp::cx(3, 0)).is_err());
    assert!(
        ComplexMatrix::identity(2)
            .kron(&ComplexMatrix::identity(2))
            .rows()
            == 4
    );
}

proptest! {
    #[test]
    fn gates_preserve_norm(seed in any::<u64>(), n in 1usize..=5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops = random_circuit(&mut rng, n, 20);
        let mut s = StateVector::from_amplitudes(random_state(&mut rng, n)).unwrap();
        s.apply_all(&ops).unwrap();
        prop_assert!((s.norm_sqr() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn inverse_undoes_gate(seed in any::<u64>(), n in 1usize..=4) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let ops = random_circuit(&mut rng, n, 10);
        let psi = random_state(&mut rng, n);
        let mut s = StateVector::from_amplitudes(psi.clone()).unwrap();
        s.apply_all(&ops).unwrap();
        let inv: Vec<GateOp> = ops.iter().rev().map(GateOp::inverse).collect();
        s.apply_all(&inv).unwrap();
        let err = s.amplitudes().iter().zip(&psi).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        prop_assert!(err < 1e-12);
    }

    #[test]
    fn density_stays_valid_under_gates(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = rng.gen_range(1..=3);
        let mut rho = random_density(&mut rng, n);
        rho.apply_all(&random_circuit(&mut rng, n, 8)).unwrap();
        prop_assert!((rho.trace() - 1.0).abs() < 1e-12);
        prop_assert!(rho.hermitian_deviation() < 1e-12);
        prop_assert!(rho.min_eigenvalue().unwrap() > -1e-12);
    }
}
