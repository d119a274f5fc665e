mod common;

use common::*;
use proptest::prelude::*;
use qfeature_core::noise::{
    apply_channel_qubit, apply_channel_stage, build_channel, strength_grid, validate_channel,
    ChannelKind,
};
use qfeature_core::numerics::{ComplexMatrix, C64};
use qfeature_core::quantum::{DensityMatrix, GateOp, StateVector};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn rho1(m: [[C64; 2]; 2]) -> DensityMatrix {
    DensityMatrix::from_matrix(ComplexMatrix::from_rows(&[m[0].to_vec(), m[1].to_vec()]).unwrap())
        .unwrap()
}

fn entries(rho: &DensityMatrix) -> [[C64; 2]; 2] {
    let m = rho.matrix();
    [[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]]
}

/// Closed-form single-qubit action of each channel.
fn closed_form(kind: ChannelKind, p: f64, r: [[C64; 2]; 2]) -> [[C64; 2]; 2] {
    let [[a, b], [cc, d]] = r;
    let q = 1.0 - p;
    match kind {
        // X r X swaps both diagonal and off-diagonal entries.
        ChannelKind::BitFlip => [
            [a * q + d * p, b * q + cc * p],
            [cc * q + b * p, d * q + a * p],
        ],
        ChannelKind::PhaseFlip => [[a, b * (1.0 - 2.0 * p)], [cc * (1.0 - 2.0 * p), d]],
        // Y r Y = [[d, -c], [-b, a]].
        ChannelKind::BitPhaseFlip => [
            [a * q + d * p, b * q - cc * p],
            [cc * q - b * p, d * q + a * p],
        ],
        ChannelKind::Depolarizing => {
            let half = (a + d) * (p / 2.0);
            [[a * q + half, b * q], [cc * q, d * q + half]]
        }
        ChannelKind::AmplitudeDamping => {
            let s = q.sqrt();
            [[a + d * p, b * s], [cc * s, d * q]]
        }
        ChannelKind::PhaseDamping => [[a, b * q], [cc * q, d]],
    }
}

#[test]
fn completeness_holds_on_fine_grid() {
    for kind in ChannelKind::ALL {
        for k in 0..=20 {
            let p = k as f64 * 0.05;
            let ch = build_channel(kind, p.min(1.0)).unwrap();
            let report = validate_channel(&ch);
            assert!(report.passed, "{kind:?} p={p}: {}", report.max_deviation);
        }
    }
}

#[test]
fn sweep_grid_steps_by_eleven_hundredths() {
    let g = strength_grid();
    assert_eq!(g.len(), 10);
    assert!((g[0] - 0.0).abs() < 1e-15 && (g[9] - 0.99).abs() < 1e-12);
    assert!(g.windows(2).all(|w| ((w[1] - w[0]) - 0.11).abs() < 1e-12));
}

#[test]
fn single_qubit_action_matches_closed_form() {
    let mut rng = ChaCha8Rng::seed_from_u64(31);
    for _ in 0..20 {
        let rho = random_density(&mut rng, 1);
        for kind in ChannelKind::ALL {
            for p in strength_grid() {
                let ch = build_channel(kind, p).unwrap();
                let got = entries(&apply_channel_qubit(&rho, &ch, 0).unwrap());
                let want = closed_form(kind, p, entries(&rho));
                for i in 0..2 {
                    for j in 0..2 {
                        assert!((got[i][j] - want[i][j]).norm() < 1e-12, "{kind:?} p={p}");
                    }
                }
            }
        }
    }
}

#[test]
fn depolarizing_on_plus_state_mixes_towards_identity() {
    let h = 0.5;
    let plus = rho1([[c(h, 0.0), c(h, 0.0)], [c(h, 0.0), c(h, 0.0)]]);
    let out = entries(&apply_channel_stage(
        &plus,
        &build_channel(ChannelKind::Depolarizing, 0.4).unwrap(),
    ));
    assert!((out[0][1].re - 0.3).abs() < 1e-14);
    assert!((out[0][0].re - 0.5).abs() < 1e-14);
}

#[test]
fn channels_are_cptp_on_random_states() {
    let mut rng = ChaCha8Rng::seed_from_u64(32);
    for _ in 0..100 {
        let rho = random_density(&mut rng, 2);
        for kind in ChannelKind::ALL {
            for p in [0.0, 0.11, 0.55, 0.99, 1.0] {
                let out = apply_channel_stage(&rho, &build_channel(kind, p).unwrap());
                assert!((out.trace() - 1.0).abs() < 1e-12);
                assert!(out.hermitian_deviation() < 1e-12);
                assert!(out.min_eigenvalue().unwrap() > -1e-10, "{kind:?} p={p}");
            }
        }
    }
}

#[test]
fn stage_on_one_qubit_equals_single_application() {
    let mut rng = ChaCha8Rng::seed_from_u64(33);
    let rho = random_density(&mut rng, 1);
    for kind in ChannelKind::ALL {
        let ch = build_channel(kind, 0.37).unwrap();
        let a = apply_channel_stage(&rho, &ch);
        let b = apply_channel_qubit(&rho, &ch, 0).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()) < 1e-15);
    }
}

#[test]
fn channels_on_distinct_qubits_commute() {
    let mut rng = ChaCha8Rng::seed_from_u64(34);
    let rho = random_density(&mut rng, 3);
    for ka in ChannelKind::ALL {
        for kb in ChannelKind::ALL {
            let a = build_channel(ka, 0.3).unwrap();
            let b = build_channel(kb, 0.7).unwrap();
            let ab =
                apply_channel_qubit(&apply_channel_qubit(&rho, &a, 0).unwrap(), &b, 2).unwrap();
            let ba =
                apply_channel_qubit(&apply_channel_qubit(&rho, &b, 2).unwrap(), &a, 0).unwrap();
            assert!(ab.matrix().max_abs_diff(ba.matrix()) < 1e-13);
        }
    }
}

#[test]
fn dephasing_leaves_basis_states_fixed() {
    for kind in [ChannelKind::PhaseFlip, ChannelKind::PhaseDamping] {
        for idx in 0..8 {
            let s = StateVector::basis(3, idx).unwrap();
            let rho = qfeature_core::quantum::state_to_density(&s);
            let out = apply_channel_stage(&rho, &build_channel(kind, 0.66).unwrap());
            assert!(out.matrix().max_abs_diff(rho.matrix()) < 1e-14);
        }
    }
}

#[test]
fn full_amplitude_damping_resets_to_zero() {
    let mut rho = DensityMatrix::maximally_mixed(2);
    rho.apply(&GateOp::ry(0, 1.0)).unwrap();
    let out = apply_channel_stage(
        &rho,
        &build_channel(ChannelKind::AmplitudeDamping, 1.0).unwrap(),
    );
    assert!((out.prob_all_zero() - 1.0).abs() < 1e-12);
}

#[test]
fn out_of_range_strength_is_rejected() {
    assert!(build_channel(ChannelKind::BitFlip, -0.01).is_err());
    assert!(build_channel(ChannelKind::BitFlip, 1.01).is_err());
    assert!(build_channel(ChannelKind::BitFlip, f64::NAN).is_err());
}

#[test]
fn names_round_trip() {
    for kind in ChannelKind::ALL {
        assert_eq!(kind.name().parse::<ChannelKind>().unwrap(), kind);
    }
    assert!("bogus".parse::<ChannelKind>().is_err());
}

proptest! {
    #[test]
    fn completeness_for_any_strength(p in 0.0f64..=1.0) {
        for kind in ChannelKind::ALL {
            prop_assert!(validate_channel(&build_channel(kind, p).unwrap()).passed);
        }
    }

    #[test]
    fn stage_preserves_trace(seed in any::<u64>(), p in 0.0f64..=1.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let rho = random_density(&mut rng, 3);
        for kind in ChannelKind::ALL {
            let out = apply_channel_stage(&rho, &build_channel(kind, p).unwrap());
            prop_assert!((out.trace() - 1.0).abs() < 1e-12);
        }
    }
}
