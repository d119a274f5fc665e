//! Independent reference implementations shared by the integration tests.
#![allow(dead_code)]

use qfeature_core::numerics::{ComplexMatrix, C64};
use qfeature_core::quantum::{DensityMatrix, GateKind, GateOp, Polarity};
use rand::Rng;

pub fn c(re: f64, im: f64) -> C64 {
    C64::new(re, im)
}

/// 2x2 matrix of a gate written out from the rotation formulas.
pub fn gate_2x2(kind: &GateKind) -> [C64; 4] {
    match *kind {
        GateKind::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [c(co, 0.0), c(-s, 0.0), c(s, 0.0), c(co, 0.0)]
        }
        GateKind::Rz(t) => [
            C64::from_polar(1.0, -t / 2.0),
            c(0.0, 0.0),
            c(0.0, 0.0),
            C64::from_polar(1.0, t / 2.0),
        ],
        GateKind::X => [c(0.0, 0.0), c(1.0, 0.0), c(1.0, 0.0), c(0.0, 0.0)],
        GateKind::Unitary(m) => m,
    }
}

/// Full `2^n x 2^n` matrix of a (anti-)controlled gate, built column by
/// column from the action on basis states.
#[allow(clippy::needless_range_loop)]
pub fn dense_gate(g: &GateOp, n: usize) -> Vec<Vec<C64>> {
    let dim = 1usize << n;
    let m = gate_2x2(&g.kind);
    let mut u = vec![vec![c(0.0, 0.0); dim]; dim];
    for k in 0..dim {
        let fires = g.controls.iter().all(|ctl| {
            let bit = (k >> ctl.qubit) & 1;
            match ctl.polarity {
                Polarity::Control => bit == 1,
                Polarity::AntiControl => bit == 0,
            }
        });
        if !fires {
            u[k][k] = c(1.0, 0.0);
            continue;
        }
        let b = (k >> g.target) & 1;
        let k0 = k & !(1 << g.target);
        let k1 = k0 | (1 << g.target);
        // Column k of the operator: m[., b] placed on the target bit.
        u[k0][k] = m[b];
        u[k1][k] = m[2 + b];
    }
    u
}

pub fn matmul(a: &[Vec<C64>], b: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let m = b[0].len();
    let inner = b.len();
    let mut out = vec![vec![c(0.0, 0.0); m]; n];
    for i in 0..n {
        for j in 0..m {
            let mut acc = c(0.0, 0.0);
            for k in 0..inner {
                acc += a[i][k] * b[k][j];
            }
            out[i][j] = acc;
        }
    }
    out
}

pub fn identity(dim: usize) -> Vec<Vec<C64>> {
    (0..dim)
        .map(|i| {
            (0..dim)
                .map(|j| if i == j { c(1.0, 0.0) } else { c(0.0, 0.0) })
                .collect()
        })
        .collect()
}

pub fn adjoint(a: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let n = a.len();
    let m = a[0].len();
    (0..m)
        .map(|i| (0..n).map(|j| a[j][i].conj()).collect())
        .collect()
}

/// Product of the dense gate matrices, first gate applied first.
pub fn circuit_unitary(ops: &[GateOp], n: usize) -> Vec<Vec<C64>> {
    ops.iter()
        .fold(identity(1 << n), |acc, g| matmul(&dense_gate(g, n), &acc))
}

pub fn apply_dense(u: &[Vec<C64>], v: &[C64]) -> Vec<C64> {
    u.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

pub fn to_rows(m: &ComplexMatrix) -> Vec<Vec<C64>> {
    (0..m.rows())
        .map(|i| (0..m.cols()).map(|j| m[(i, j)]).collect())
        .collect()
}

pub fn max_diff(a: &[Vec<C64>], b: &[Vec<C64>]) -> f64 {
    a.iter()
        .flatten()
        .zip(b.iter().flatten())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

pub fn random_gate<R: Rng>(rng: &mut R, n: usize) -> GateOp {
    use qfeature_core::quantum::Control;
    let target = rng.gen_range(0..n);
    let angle = rng.gen_range(-6.3..6.3);
    let kind = match rng.gen_range(0..3) {
        0 => GateKind::Ry(angle),
        1 => GateKind::Rz(angle),
        _ => GateKind::X,
    };
    let mut controls = Vec::new();
    for q in 0..n {
        if q != target && rng.gen_bool(0.35) {
            controls.push(if rng.gen_bool(0.5) {
                Control::on(q)
            } else {
                Control::anti(q)
            });
        }
    }
    GateOp::new(kind, target, controls)
}

pub fn random_circuit<R: Rng>(rng: &mut R, n: usize, len: usize) -> Vec<GateOp> {
    (0..len).map(|_| random_gate(rng, n)).collect()
}

/// `A A^dagger / tr` for a random complex `A`: a full-rank density matrix.
pub fn random_density<R: Rng>(rng: &mut R, n: usize) -> DensityMatrix {
    let dim = 1 << n;
    let a: Vec<Vec<C64>> = (0..dim)
        .map(|_| {
            (0..dim)
                .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
                .collect()
        })
        .collect();
    let rho = matmul(&a, &adjoint(&a));
    let tr: f64 = (0..dim).map(|i| rho[i][i].re).sum();
    let scaled: Vec<Vec<C64>> = rho
        .iter()
        .map(|r| r.iter().map(|x| x / tr).collect())
        .collect();
    DensityMatrix::from_matrix(ComplexMatrix::from_rows(&scaled).unwrap()).unwrap()
}

pub fn random_state<R: Rng>(rng: &mut R, n: usize) -> Vec<C64> {
    let v: Vec<C64> = (0..1 << n)
        .map(|_| c(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect();
    let norm = v.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|x| x / norm).collect()
}
