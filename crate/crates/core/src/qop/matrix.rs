//! Dense complex matrices over an n-qubit register.
//!
//! Basis index `x` encodes `|x_1 x_2 ... x_n>` with qubit 1 as the most
//! significant bit, so qubit `q` lives at bit `n - q` of the index and is the
//! `q`-th factor of a left-to-right Kronecker product.

use std::fmt;

use ndarray::Array2;
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Largest register handled by the dense representation.
pub const MAX_QUBITS: usize = 12;

/// A 2x2 single-qubit operator in row-major order.
pub type Gate2 = [[C64; 2]; 2];

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);

/// Bit position of qubit `q` (1-based) inside a basis index of an `n`-qubit register.
#[inline]
pub fn qubit_bit(q: usize, n: usize) -> usize {
    1 << (n - q)
}

/// Value (0 or 1) of qubit `q` in basis state `x`.
#[inline]
pub fn qubit_value(x: usize, q: usize, n: usize) -> usize {
    (x >> (n - q)) & 1
}

pub fn check_qubit_count(n: usize) -> Result<()> {
    if (1..=MAX_QUBITS).contains(&n) {
        Ok(())
    } else {
        Err(Error::QubitCount(n))
    }
}

pub(crate) fn check_qubit(q: usize, n: usize) -> Result<()> {
    if (1..=n).contains(&q) {
        Ok(())
    } else {
        Err(Error::QubitOutOfRange { qubit: q, n })
    }
}

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    data: Array2<C64>,
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Matrix({}x{}) {:?}", self.dim(), self.dim(), self.data)
    }
}

impl Matrix {
    pub fn zeros(dim: usize) -> Self {
        Matrix {
            data: Array2::zeros((dim, dim)),
        }
    }

    pub fn identity(dim: usize) -> Self {
        Matrix {
            data: Array2::eye(dim),
        }
    }

    pub fn from_diagonal(diag: &[C64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m.data[(i, i)] = d;
        }
        m
    }

    /// Builds a matrix from rows; every row must have as many entries as there are rows.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let dim = rows.len();
        let mut m = Self::zeros(dim);
        for (i, row) in rows.iter().enumerate() {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            for (j, &v) in row.iter().enumerate() {
                m.data[(i, j)] = v;
            }
        }
        Ok(m)
    }

    pub fn from_gate(g: &Gate2) -> Self {
        Matrix {
            data: Array2::from_shape_fn((2, 2), |(i, j)| g[i][j]),
        }
    }

    pub fn dim(&self) -> usize {
        self.data.nrows()
    }

    /// Number of qubits, if the dimension is a power of two.
    pub fn num_qubits(&self) -> Option<usize> {
        let d = self.dim();
        d.is_power_of_two().then(|| d.trailing_zeros() as usize)
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.data[(i, j)]
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        self.data[(i, j)] = v;
    }

    pub fn as_array(&self) -> &Array2<C64> {
        &self.data
    }

    pub fn diagonal(&self) -> Vec<C64> {
        self.data.diag().to_vec()
    }

    pub fn adjoint(&self) -> Self {
        Matrix {
            data: self.data.t().mapv(|z| z.conj()),
        }
    }

    pub fn matmul(&self, other: &Matrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Matrix {
            data: self.data.dot(&other.data),
        })
    }

    pub fn add(&self, other: &Matrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Matrix {
            data: &self.data + &other.data,
        })
    }

    pub fn sub(&self, other: &Matrix) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Matrix {
            data: &self.data - &other.data,
        })
    }

    pub fn scale(&self, s: C64) -> Self {
        Matrix {
            data: self.data.mapv(|z| z * s),
        }
    }

    pub fn kron(&self, other: &Matrix) -> Self {
        let (a, b) = (self.dim(), other.dim());
        let mut out = Array2::zeros((a * b, a * b));
        for i in 0..a {
            for j in 0..a {
                let s = self.data[(i, j)];
                if s == ZERO {
                    continue;
                }
                for k in 0..b {
                    for l in 0..b {
                        out[(i * b + k, j * b + l)] = s * other.data[(k, l)];
                    }
                }
            }
        }
        Matrix { data: out }
    }

    pub fn trace(&self) -> C64 {
        self.data.diag().sum()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f64> {
        self.check_same_dim(other)?;
        Ok(self
            .data
            .iter()
            .zip(other.data.iter())
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        let prod = self.adjoint().data.dot(&self.data);
        let id = Matrix { data: prod };
        id.max_abs_diff(&Matrix::identity(self.dim()))
            .is_ok_and(|d| d <= tol)
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        self.max_abs_diff(&self.adjoint()).is_ok_and(|d| d <= tol)
    }

    pub fn is_diagonal(&self, tol: f64) -> bool {
        self.data
            .indexed_iter()
            .all(|((i, j), z)| i == j || z.norm() <= tol)
    }

    fn check_same_dim(&self, other: &Matrix) -> Result<()> {
        if self.dim() == other.dim() {
            Ok(())
        } else {
            Err(Error::DimensionMismatch {
                left: self.dim(),
                right: other.dim(),
            })
        }
    }

    /// `self <- G_q * self` for a single-qubit operator on qubit `q` of an `n`-qubit register.
    pub(crate) fn left_apply_1q(&mut self, g: &Gate2, q: usize, n: usize) {
        let dim = self.dim();
        let bit = qubit_bit(q, n);
        let data = self.data.as_slice_mut().expect("standard layout");
        for i0 in (0..dim).filter(|i| i & bit == 0) {
            let i1 = i0 | bit;
            for j in 0..dim {
                let a = data[i0 * dim + j];
                let b = data[i1 * dim + j];
                data[i0 * dim + j] = g[0][0] * a + g[0][1] * b;
                data[i1 * dim + j] = g[1][0] * a + g[1][1] * b;
            }
        }
    }

    /// `self <- self * G_q^dagger`.
    pub(crate) fn right_apply_1q_adjoint(&mut self, g: &Gate2, q: usize, n: usize) {
        let dim = self.dim();
        let bit = qubit_bit(q, n);
        let data = self.data.as_slice_mut().expect("standard layout");
        let h = [
            [g[0][0].conj(), g[1][0].conj()],
            [g[0][1].conj(), g[1][1].conj()],
        ];
        for row in data.chunks_exact_mut(dim) {
            for j0 in (0..dim).filter(|j| j & bit == 0) {
                let j1 = j0 | bit;
                let a = row[j0];
                let b = row[j1];
                row[j0] = a * h[0][0] + b * h[1][0];
                row[j1] = a * h[0][1] + b * h[1][1];
            }
        }
    }

    /// `self <- D * self` for a diagonal `D`.
    pub(crate) fn left_apply_diagonal(&mut self, phases: &[C64]) {
        let dim = self.dim();
        let data = self.data.as_slice_mut().expect("standard layout");
        for (row, p) in data.chunks_exact_mut(dim).zip(phases) {
            row.iter_mut().for_each(|z| *z *= p);
        }
    }

    /// `self <- D * self * D^dagger` for a diagonal unitary `D`.
    pub(crate) fn conjugate_diagonal(&mut self, phases: &[C64]) {
        let dim = self.dim();
        let data = self.data.as_slice_mut().expect("standard layout");
        for (row, p) in data.chunks_exact_mut(dim).zip(phases) {
            for (z, q) in row.iter_mut().zip(phases) {
                *z *= p * q.conj();
            }
        }
    }
}

/// Single-qubit Pauli operators and identity.
pub mod pauli {
    use super::{Matrix, C64, ONE, ZERO};

    pub fn identity() -> Matrix {
        Matrix::identity(2)
    }

    pub fn x() -> Matrix {
        Matrix::from_gate(&[[ZERO, ONE], [ONE, ZERO]])
    }

    pub fn y() -> Matrix {
        let i = C64::new(0.0, 1.0);
        Matrix::from_gate(&[[ZERO, -i], [i, ZERO]])
    }

    pub fn z() -> Matrix {
        Matrix::from_gate(&[[ONE, ZERO], [ZERO, -ONE]])
    }
}

/// Left-to-right Kronecker product of single-qubit operators; the first
/// factor acts on qubit 1 (most significant bit).
pub fn kron_chain(factors: &[Matrix]) -> Result<Matrix> {
    if factors.is_empty() {
        return Err(Error::EmptyChain);
    }
    check_qubit_count(factors.len())?;
    for (index, f) in factors.iter().enumerate() {
        if f.dim() != 2 {
            return Err(Error::NotSingleQubit {
                index,
                rows: f.dim(),
                cols: f.dim(),
            });
        }
    }
    let mut acc = factors[0].clone();
    for f in &factors[1..] {
        acc = acc.kron(f);
    }
    Ok(acc)
}

/// `|tr(A^dagger B)| / dim`, equal to 1 exactly when `A = e^{i phi} B` for unitaries.
pub fn global_phase_fidelity(a: &Matrix, b: &Matrix) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch {
            left: a.dim(),
            right: b.dim(),
        });
    }
    let overlap: C64 = a
        .as_array()
        .iter()
        .zip(b.as_array().iter())
        .map(|(x, y)| x.conj() * y)
        .sum();
    Ok(overlap.norm() / a.dim() as f64)
}
