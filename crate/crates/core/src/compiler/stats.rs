use serde::Serialize;

use super::gate::{Axis, NativeGate};
use super::sequence::PulseSequence;
use super::topology::{zz_duration, zz_effective_angle};
use crate::error::{Error, Result};
use crate::spin_system::SpinSystem;

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct SequenceStats {
    pub rf_gates: usize,
    pub z_rotations: usize,
    pub zz_gates: usize,
    pub cnot_expansions: usize,
    pub swap_expansions: usize,
    /// Sum of free-evolution times of all ZZ gates.
    pub j_evolution_s: f64,
    /// Indices of ZZ gates with negative angle, timed as their `angle mod pi` equivalent.
    pub phase_inverted_zz: Vec<usize>,
}

/// Gate counts and total J-evolution time of `seq` on `system`.
pub fn sequence_stats(seq: &PulseSequence, system: &SpinSystem) -> Result<SequenceStats> {
    if seq.num_qubits() != system.len() {
        return Err(Error::DimensionMismatch {
            left: seq.num_qubits(),
            right: system.len(),
        });
    }
    let mut st = SequenceStats {
        cnot_expansions: seq.counts.cnots,
        swap_expansions: seq.counts.swaps,
        ..SequenceStats::default()
    };
    for (i, g) in seq.gates.iter().enumerate() {
        match *g {
            NativeGate::Rf { axis, .. } => {
                st.rf_gates += 1;
                if axis == Axis::Z {
                    st.z_rotations += 1;
                }
            }
            NativeGate::Zz { k, l, angle, .. } => {
                st.zz_gates += 1;
                if k > system.len() || l > system.len() {
                    return Err(Error::QubitOutOfRange {
                        qubit: k.max(l),
                        n: system.len(),
                    });
                }
                let j = system.j(k, l);
                if j == 0.0 {
                    return Err(Error::ZeroAdjacentCoupling(k, l));
                }
                if zz_effective_angle(angle) != angle {
                    st.phase_inverted_zz.push(i);
                }
                st.j_evolution_s += zz_duration(angle, j);
            }
        }
    }
    Ok(st)
}
