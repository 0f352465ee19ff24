//! Sign diagonals, parity supports and parity-phase gates.

use std::f64::consts::PI;
use std::fmt;

use serde::{Deserialize, Serialize};

use super::matrix::{check_qubit, check_qubit_count, Matrix, C64};
use crate::error::{Error, Result};

/// A set of qubits (1-based, sorted, distinct) over which Pauli-z factors are multiplied.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Support(Vec<usize>);

impl Support {
    pub fn new(qubits: impl IntoIterator<Item = usize>) -> Self {
        let mut v: Vec<usize> = qubits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Support(v)
    }

    pub fn empty() -> Self {
        Support(Vec::new())
    }

    /// Qubits `lo..=hi`.
    pub fn range(lo: usize, hi: usize) -> Self {
        Support((lo..=hi).collect())
    }

    pub fn qubits(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, q: usize) -> bool {
        self.0.binary_search(&q).is_ok()
    }

    /// Checks every qubit lies in `1..=n`.
    pub fn check_within(&self, n: usize) -> Result<()> {
        self.0.iter().try_for_each(|&q| check_qubit(q, n))
    }

    /// Bit mask over basis indices of an `n`-qubit register.
    pub fn index_mask(&self, n: usize) -> usize {
        self.0.iter().fold(0, |m, &q| m | (1 << (n - q)))
    }

    pub fn from_index_mask(mask: usize, n: usize) -> Self {
        Support((1..=n).filter(|&q| mask & (1 << (n - q)) != 0).collect())
    }

    pub fn is_contiguous(&self) -> bool {
        self.0.windows(2).all(|w| w[1] == w[0] + 1)
    }
}

impl fmt::Display for Support {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, q) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{q}")?;
        }
        write!(f, "}}")
    }
}

/// `prod_{i in S} (-1)^{x_i}` for a basis index and an index mask.
#[inline]
pub fn parity_sign_mask(x: usize, mask: usize) -> i32 {
    if (x & mask).count_ones().is_multiple_of(2) {
        1
    } else {
        -1
    }
}

pub fn parity_sign(x: usize, support: &Support, n: usize) -> i32 {
    parity_sign_mask(x, support.index_mask(n))
}

/// One product-operator term `coefficient * Z_S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityTerm {
    pub support: Support,
    pub coefficient: f64,
}

impl ParityTerm {
    pub fn new(support: Support, coefficient: f64) -> Self {
        ParityTerm {
            support,
            coefficient,
        }
    }
}

/// `exp(i * angle * Z_S)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParityPhaseGate {
    support: Support,
    pub angle: f64,
}

impl ParityPhaseGate {
    pub fn new(support: Support, angle: f64) -> Result<Self> {
        if support.is_empty() {
            return Err(Error::EmptySupport);
        }
        Ok(ParityPhaseGate { support, angle })
    }

    pub fn support(&self) -> &Support {
        &self.support
    }

    /// Diagonal of the gate on an `n`-qubit register.
    pub fn phases(&self, n: usize) -> Result<Vec<C64>> {
        check_qubit_count(n)?;
        self.support.check_within(n)?;
        let mask = self.support.index_mask(n);
        Ok((0..1usize << n)
            .map(|x| C64::from_polar(1.0, self.angle * f64::from(parity_sign_mask(x, mask))))
            .collect())
    }
}

pub fn parity_phase_unitary(gate: &ParityPhaseGate, n: usize) -> Result<Matrix> {
    Ok(Matrix::from_diagonal(&gate.phases(n)?))
}

/// Diagonal operator with entries in {+1, -1}; entry `x` is the eigenvalue on `|x>`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiagonalSignOperator {
    n: usize,
    signs: Vec<i8>,
}

impl DiagonalSignOperator {
    pub fn new(n: usize, signs: Vec<i8>) -> Result<Self> {
        check_qubit_count(n)?;
        if signs.len() != 1 << n {
            return Err(Error::TableLength {
                len: signs.len(),
                n,
            });
        }
        if let Some((index, &s)) = signs.iter().enumerate().find(|(_, &s)| s != 1 && s != -1) {
            return Err(Error::NotASignVector {
                index,
                value: f64::from(s),
            });
        }
        Ok(DiagonalSignOperator { n, signs })
    }

    pub fn identity(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(DiagonalSignOperator {
            n,
            signs: vec![1; 1 << n],
        })
    }

    /// Builds the diagonal from a per-basis-state predicate (`true` means -1).
    pub fn from_flips(n: usize, flip: impl Fn(usize) -> bool) -> Result<Self> {
        check_qubit_count(n)?;
        Ok(DiagonalSignOperator {
            n,
            signs: (0..1usize << n)
                .map(|x| if flip(x) { -1 } else { 1 })
                .collect(),
        })
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn trace(&self) -> i64 {
        self.signs.iter().map(|&s| i64::from(s)).sum()
    }

    /// Pointwise product, i.e. the operator product of two commuting diagonals.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                left: 1 << self.n,
                right: 1 << other.n,
            });
        }
        Ok(DiagonalSignOperator {
            n: self.n,
            signs: self
                .signs
                .iter()
                .zip(&other.signs)
                .map(|(a, b)| a * b)
                .collect(),
        })
    }

    /// Reorders qubits: qubit `q` of the result carries what qubit `perm[q-1]` carried in `self`.
    pub fn permute_qubits(&self, perm: &[usize]) -> Result<Self> {
        let n = self.n;
        if perm.len() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: perm.len(),
            });
        }
        let mut seen = vec![false; n];
        for &p in perm {
            check_qubit(p, n)?;
            if std::mem::replace(&mut seen[p - 1], true) {
                return Err(Error::DuplicateSupport(vec![p]));
            }
        }
        let signs = (0..1usize << n)
            .map(|y| {
                let x = perm.iter().enumerate().fold(0usize, |acc, (i, &src)| {
                    let bit = (y >> (n - 1 - i)) & 1;
                    acc | (bit << (n - src))
                });
                self.signs[x]
            })
            .collect();
        Ok(DiagonalSignOperator { n, signs })
    }

    pub fn phases(&self) -> Vec<C64> {
        self.signs
            .iter()
            .map(|&s| C64::new(f64::from(s), 0.0))
            .collect()
    }

    pub fn to_matrix(&self) -> Matrix {
        Matrix::from_diagonal(&self.phases())
    }

    /// The phase `pi * f(x)` form: entry x is `e^{i pi [s_x = -1]}`.
    pub fn phase_angles(&self) -> Vec<f64> {
        self.signs
            .iter()
            .map(|&s| if s < 0 { PI } else { 0.0 })
            .collect()
    }
}
