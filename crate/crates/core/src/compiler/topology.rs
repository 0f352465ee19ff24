use crate::error::{Error, Result};

/// Linear coupling chain `1 - 2 - ... - n`, optionally with the J coupling of every edge.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingTopology {
    n: usize,
    edge_j_hz: Option<Vec<f64>>,
}

impl CouplingTopology {
    pub fn path(n: usize) -> Self {
        CouplingTopology { n, edge_j_hz: None }
    }

    /// Attaches couplings; entry `i` belongs to edge `(i+1, i+2)`.
    pub fn with_couplings(mut self, j_hz: Vec<f64>) -> Result<Self> {
        if j_hz.len() != self.n.saturating_sub(1) {
            return Err(Error::DimensionMismatch {
                left: self.n.saturating_sub(1),
                right: j_hz.len(),
            });
        }
        self.edge_j_hz = Some(j_hz);
        Ok(self)
    }

    pub fn num_spins(&self) -> usize {
        self.n
    }

    pub fn edges(&self) -> Vec<(usize, usize)> {
        (1..self.n).map(|k| (k, k + 1)).collect()
    }

    pub fn is_adjacent(&self, k: usize, l: usize) -> bool {
        k >= 1 && l >= 1 && k <= self.n && l <= self.n && k.abs_diff(l) == 1
    }

    pub fn check_adjacent(&self, k: usize, l: usize) -> Result<()> {
        if self.is_adjacent(k, l) {
            Ok(())
        } else {
            Err(Error::NotAdjacent(k, l))
        }
    }

    pub fn coupling_hz(&self, k: usize, l: usize) -> Option<f64> {
        if !self.is_adjacent(k, l) {
            return None;
        }
        self.edge_j_hz.as_ref().map(|j| j[k.min(l) - 1])
    }
}

/// Free-evolution time for `exp(-i angle Z_k Z_l)` under `H = 2 pi J I_z S_z`.
///
/// Negative angles are realized by the equivalent `angle mod pi` evolution
/// (the same unitary up to a global sign).
pub fn zz_duration(angle: f64, j_hz: f64) -> f64 {
    2.0 * zz_effective_angle(angle) / (std::f64::consts::PI * j_hz)
}

pub fn zz_effective_angle(angle: f64) -> f64 {
    if angle >= 0.0 {
        angle
    } else {
        angle.rem_euclid(std::f64::consts::PI)
    }
}
