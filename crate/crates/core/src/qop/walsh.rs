//! Walsh (parity) decomposition of sign diagonals.
//!
//! A ±1 diagonal `s` on n qubits expands as `s(x) = sum_S c_S chi_S(x)` with
//! `c_S = 2^-n sum_x s(x) chi_S(x)`. The unnormalized coefficients are
//! integers, so the transform runs in `i64` and the coefficients come out as
//! exact dyadic rationals.

use std::collections::BTreeSet;

use super::matrix::check_qubit_count;
use super::parity::{parity_sign_mask, DiagonalSignOperator, ParityTerm, Support};
use crate::error::{Error, Result};

/// Reconstruction entries further than this from ±1 are rejected.
pub const SIGN_TOLERANCE: f64 = 1e-9;

/// In-place fast Walsh-Hadamard transform (unnormalized).
pub fn fwht(data: &mut [i64]) {
    let len = data.len();
    debug_assert!(len.is_power_of_two());
    let mut h = 1;
    while h < len {
        for block in (0..len).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (data[i], data[i + h]);
                data[i] = a + b;
                data[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Integer Walsh spectrum `W[mask] = sum_x s(x) chi_mask(x)`, indexed by support mask.
pub fn walsh_spectrum(d: &DiagonalSignOperator) -> Vec<i64> {
    let mut w: Vec<i64> = d.signs().iter().map(|&s| i64::from(s)).collect();
    fwht(&mut w);
    w
}

/// Nonzero parity terms of `d`, ordered by support size and then lexicographically.
pub fn walsh_transform(d: &DiagonalSignOperator) -> Vec<ParityTerm> {
    let n = d.num_qubits();
    let scale = (1u64 << n) as f64;
    let mut terms: Vec<ParityTerm> = walsh_spectrum(d)
        .into_iter()
        .enumerate()
        .filter(|&(_, w)| w != 0)
        .map(|(mask, w)| ParityTerm::new(Support::from_index_mask(mask, n), w as f64 / scale))
        .collect();
    terms.sort_by(|a, b| {
        (a.support.len(), a.support.qubits()).cmp(&(b.support.len(), b.support.qubits()))
    });
    terms
}

/// Inverse of [`walsh_transform`]; fails unless the terms sum to a ±1 vector.
pub fn walsh_reconstruct(terms: &[ParityTerm], n: usize) -> Result<DiagonalSignOperator> {
    check_qubit_count(n)?;
    let mut seen = BTreeSet::new();
    let mut masks = Vec::with_capacity(terms.len());
    for t in terms {
        t.support.check_within(n)?;
        if !seen.insert(t.support.clone()) {
            return Err(Error::DuplicateSupport(t.support.qubits().to_vec()));
        }
        masks.push((t.support.index_mask(n), t.coefficient));
    }
    let signs = (0..1usize << n)
        .map(|x| {
            let v: f64 = masks
                .iter()
                .map(|&(m, c)| c * f64::from(parity_sign_mask(x, m)))
                .sum();
            if (v - 1.0).abs() <= SIGN_TOLERANCE {
                Ok(1)
            } else if (v + 1.0).abs() <= SIGN_TOLERANCE {
                Ok(-1)
            } else {
                Err(Error::NotASignVector { index: x, value: v })
            }
        })
        .collect::<Result<Vec<i8>>>()?;
    DiagonalSignOperator::new(n, signs)
}
