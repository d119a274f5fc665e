//! Dense complex linear algebra and a symmetric eigensolver.
//!
//! Everything here is double precision and row-major. Matrices are small
//! (at most a few hundred entries on each side) so no attempt is made at
//! blocking or SIMD.

mod eigen;

use std::ops::{Index, IndexMut};

pub use num_complex::Complex64 as C64;

pub use eigen::{eigh_symmetric, SymmetricEigen};

use crate::error::{Error, Result};

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![ZERO; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    /// 2x2 matrix from its four entries in row-major order.
    pub fn from_2x2(m: [C64; 4]) -> Self {
        Self {
            rows: 2,
            cols: 2,
            data: m.to_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a == ZERO {
                    continue;
                }
                let row = &other.data[k * other.cols..(k + 1) * other.cols];
                let dst = &mut out.data[i * other.cols..(i + 1) * other.cols];
                for (d, b) in dst.iter_mut().zip(row) {
                    *d += a * b;
                }
            }
        }
        Ok(out)
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.data[j * self.rows + i] = self.data[i * self.cols + j].conj();
            }
        }
        out
    }

    /// Kronecker product with block layout `self[i,j] * other`.
    pub fn kron(&self, other: &Self) -> Self {
        let rows = self.rows * other.rows;
        let cols = self.cols * other.cols;
        let mut out = Self::zeros(rows, cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self.data[i * self.cols + j];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out.data[(i * other.rows + k) * cols + j * other.cols + l] =
                            a * other.data[k * other.cols + l];
                    }
                }
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(Error::Dimension(format!(
                "cannot add {}x{} and {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(Self {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a + b)
                .collect(),
        })
    }

    /// Largest entrywise modulus of `self - other`; infinite on shape mismatch.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data
            .iter()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    /// Largest deviation from Hermitian symmetry, `max |a_ij - conj(a_ji)|`.
    pub fn hermitian_deviation(&self) -> f64 {
        if !self.is_square() {
            return f64::INFINITY;
        }
        let n = self.rows;
        let mut worst: f64 = 0.0;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// Applies the matrix to a vector.
    pub fn apply(&self, v: &ComplexVector) -> Result<ComplexVector> {
        if self.cols != v.dim() {
            return Err(Error::Dimension(format!(
                "cannot apply {}x{} matrix to vector of length {}",
                self.rows,
                self.cols,
                v.dim()
            )));
        }
        let data = (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v.as_slice())
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect();
        Ok(ComplexVector::new(data))
    }

    /// Real embedding `[[Re, -Im], [Im, Re]]` of a Hermitian matrix. Its
    /// spectrum is the Hermitian spectrum with every eigenvalue doubled.
    pub fn hermitian_real_embedding(&self) -> RealMatrix {
        let n = self.rows;
        let mut out = RealMatrix::zeros(2 * n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                let z = self[(i, j)];
                out[(i, j)] = z.re;
                out[(i + n, j + n)] = z.re;
                out[(i, j + n)] = -z.im;
                out[(i + n, j)] = z.im;
            }
        }
        out
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;

    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

/// Dense complex column vector.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexVector {
    data: Vec<C64>,
}

impl ComplexVector {
    pub fn new(data: Vec<C64>) -> Self {
        Self { data }
    }

    pub fn zeros(dim: usize) -> Self {
        Self {
            data: vec![ZERO; dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.data.len()
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    /// `<self|other>`, conjugate-linear in `self`.
    pub fn dot(&self, other: &Self) -> Result<C64> {
        if self.dim() != other.dim() {
            return Err(Error::Dimension(format!(
                "inner product of vectors with lengths {} and {}",
                self.dim(),
                other.dim()
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| a.conj() * b)
            .sum())
    }

    pub fn norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }
}

/// Dense real matrix stored row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct RealMatrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl RealMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    pub fn from_vec(rows: usize, cols: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries cannot fill a {rows}x{cols} matrix",
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self> {
        let cols = rows.first().map_or(0, Vec::len);
        if rows.iter().any(|r| r.len() != cols) {
            return Err(Error::Dimension("ragged rows".into()));
        }
        Ok(Self {
            rows: rows.len(),
            cols,
            data: rows.concat(),
        })
    }

    pub fn diagonal(values: &[f64]) -> Self {
        let mut m = Self::zeros(values.len(), values.len());
        for (i, v) in values.iter().enumerate() {
            m[(i, i)] = *v;
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn transpose(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out[(j, i)] = self[(i, j)];
            }
        }
        out
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                for j in 0..other.cols {
                    out.data[i * other.cols + j] += a * other.data[k * other.cols + j];
                }
            }
        }
        Ok(out)
    }

    pub fn trace(&self) -> f64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.rows != other.rows || self.cols != other.cols {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }
}

impl Index<(usize, usize)> for RealMatrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for RealMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        assert!(
            i < self.rows && j < self.cols,
            "index ({i},{j}) out of bounds"
        );
        &mut self.data[i * self.cols + j]
    }
}

/// The Pauli matrices, used by gates and noise channels.
pub mod pauli {
    use super::{C64, I, ONE, ZERO};

    pub const IDENTITY: [C64; 4] = [ONE, ZERO, ZERO, ONE];
    pub const X: [C64; 4] = [ZERO, ONE, ONE, ZERO];
    pub const Y: [C64; 4] = [ZERO, C64::new(0.0, -1.0), I, ZERO];
    pub const Z: [C64; 4] = [ONE, ZERO, ZERO, C64::new(-1.0, 0.0)];
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> ComplexMatrix {
        ComplexMatrix::from_2x2(pauli::X)
    }

    fn y() -> ComplexMatrix {
        ComplexMatrix::from_2x2(pauli::Y)
    }

    #[test]
    fn identity_products() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.matmul(&i2).unwrap(), i2);
        assert_eq!(x().matmul(&x()).unwrap(), i2);
    }

    #[test]
    fn matmul_rejects_mismatch() {
        let a = ComplexMatrix::zeros(2, 3);
        assert!(matches!(a.matmul(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn adjoint_fixed_points() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.adjoint(), i2);
        assert_eq!(y().adjoint(), y());
    }

    #[test]
    fn kron_identity() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(i2.kron(&i2), ComplexMatrix::identity(4));
    }

    #[test]
    fn kron_flips_high_bit() {
        // Under little-endian ordering, the left Kronecker factor acts on the
        // most significant qubit, so X (x) I sends index 0 (|00>) to index 2.
        let op = x().kron(&ComplexMatrix::identity(2));
        let basis = ComplexVector::new(vec![ONE, ZERO, ZERO, ZERO]);
        let out = op.apply(&basis).unwrap();
        assert_eq!(out.as_slice()[2], ONE);
        assert_eq!(out.norm(), 1.0);
    }

    #[test]
    fn from_vec_checks_len() {
        assert!(ComplexMatrix::from_vec(2, 2, vec![ZERO; 3]).is_err());
        assert!(RealMatrix::from_vec(2, 2, vec![0.0; 4]).is_ok());
    }

    #[test]
    fn hermitian_embedding_spectrum_doubles() {
        let e = eigh_symmetric(&y().hermitian_real_embedding()).unwrap();
        let expected = [1.0, 1.0, -1.0, -1.0];
        for (a, b) in e.values.iter().zip(expected) {
            assert!((a - b).abs() < 1e-12);
        }
    }
}
