use crate::error::{Error, Result};

use super::RealMatrix;

const MAX_SWEEPS: usize = 100;
const OFF_DIAGONAL_TOL: f64 = 1e-12;
const SYMMETRY_TOL: f64 = 1e-10;

/// Eigen-decomposition of a real symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors stored as columns, aligned with `values`.
    pub vectors: RealMatrix,
}

impl SymmetricEigen {
    /// `V diag(values) V^T`.
    pub fn reconstruct(&self) -> RealMatrix {
        let n = self.values.len();
        let mut out = RealMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                out[(i, j)] = (0..n)
                    .map(|k| self.vectors[(i, k)] * self.values[k] * self.vectors[(j, k)])
                    .sum();
            }
        }
        out
    }
}

fn off_diagonal_norm(a: &RealMatrix) -> f64 {
    let n = a.rows();
    let mut acc = 0.0;
    for i in 0..n {
        for j in 0..n {
            if i != j {
                acc += a[(i, j)] * a[(i, j)];
            }
        }
    }
    acc.sqrt()
}

/// Cyclic Jacobi eigensolver for real symmetric matrices.
///
/// Sweeps until the off-diagonal Frobenius mass drops below `1e-12` relative
/// to the matrix norm, capped at 100 sweeps. Each eigenvector is signed so
/// that its first non-negligible component is positive.
pub fn eigh_symmetric(a: &RealMatrix) -> Result<SymmetricEigen> {
    let n = a.rows();
    if a.cols() != n {
        return Err(Error::Dimension(format!(
            "eigh_symmetric needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::InvalidInput("matrix has non-finite entries".into()));
    }
    for i in 0..n {
        for j in (i + 1)..n {
            let d = (a[(i, j)] - a[(j, i)]).abs();
            if d > SYMMETRY_TOL {
                return Err(Error::InvalidInput(format!(
                    "matrix not symmetric: |a[{i},{j}] - a[{j},{i}]| = {d:e}"
                )));
            }
        }
    }

    let mut m = a.clone();
    // Symmetrise exactly so rotations see identical mirrored entries.
    for i in 0..n {
        for j in (i + 1)..n {
            let avg = 0.5 * (m[(i, j)] + m[(j, i)]);
            m[(i, j)] = avg;
            m[(j, i)] = avg;
        }
    }
    let mut v = RealMatrix::identity(n);
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);

    let mut sweeps = 0;
    loop {
        let off = off_diagonal_norm(&m);
        if off <= OFF_DIAGONAL_TOL * scale {
            break;
        }
        if sweeps == MAX_SWEEPS {
            return Err(Error::NoConvergence {
                sweeps,
                off_diagonal: off,
            });
        }
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                if apq == 0.0 {
                    continue;
                }
                let theta = (m[(q, q)] - m[(p, p)]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                rotate(&mut m, &mut v, p, q, c, s);
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(j, j)].total_cmp(&m[(i, i)]));
    let values = order.iter().map(|&i| m[(i, i)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        let col = v.column(src);
        let sign = col
            .iter()
            .find(|x| x.abs() > 1e-12)
            .map_or(1.0, |x| x.signum());
        for (i, x) in col.iter().enumerate() {
            vectors[(i, dst)] = sign * x;
        }
    }
    Ok(SymmetricEigen { values, vectors })
}

/// Applies `m <- J^T m J` and `v <- v J` for the Jacobi rotation in plane (p, q).
fn rotate(m: &mut RealMatrix, v: &mut RealMatrix, p: usize, q: usize, c: f64, s: f64) {
    let n = m.rows();
    for k in 0..n {
        let mkp = m[(k, p)];
        let mkq = m[(k, q)];
        m[(k, p)] = c * mkp - s * mkq;
        m[(k, q)] = s * mkp + c * mkq;
    }
    for k in 0..n {
        let mpk = m[(p, k)];
        let mqk = m[(q, k)];
        m[(p, k)] = c * mpk - s * mqk;
        m[(q, k)] = s * mpk + c * mqk;
    }
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = c * vkp - s * vkq;
        v[(k, q)] = s * vkp + c * vkq;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_input() {
        let e = eigh_symmetric(&RealMatrix::diagonal(&[2.0, 1.0])).unwrap();
        assert_eq!(e.values, vec![2.0, 1.0]);
        assert_eq!(e.vectors, RealMatrix::identity(2));
    }

    #[test]
    fn ascending_diagonal_is_reordered() {
        let e = eigh_symmetric(&RealMatrix::diagonal(&[1.0, 3.0, 2.0])).unwrap();
        assert_eq!(e.values, vec![3.0, 2.0, 1.0]);
        assert_eq!(e.vectors.column(0), vec![0.0, 1.0, 0.0]);
    }

    #[test]
    fn exchange_matrix() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let e = eigh_symmetric(&a).unwrap();
        assert!((e.values[0] - 1.0).abs() < 1e-14);
        assert!((e.values[1] + 1.0).abs() < 1e-14);
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let v0 = e.vectors.column(0);
        let v1 = e.vectors.column(1);
        assert!((v0[0] - h).abs() < 1e-14 && (v0[1] - h).abs() < 1e-14);
        assert!((v1[0] - h).abs() < 1e-14 && (v1[1] + h).abs() < 1e-14);
    }

    #[test]
    fn rejects_asymmetric() {
        let a = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.5, 0.0]]).unwrap();
        assert!(matches!(eigh_symmetric(&a), Err(Error::InvalidInput(_))));
    }

    #[test]
    fn zero_matrix() {
        let e = eigh_symmetric(&RealMatrix::zeros(3, 3)).unwrap();
        assert_eq!(e.values, vec![0.0; 3]);
    }
}
