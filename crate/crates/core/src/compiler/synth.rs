//! Synthesis of CNOT, SWAP and n-th order parity phases from RF rotations
//! and nearest-neighbour J-coupling gates.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

use super::gate::{Axis, NativeGate};
use super::sequence::{ExpansionCounts, PulseSequence};
use super::topology::{zz_duration, CouplingTopology};
use crate::error::{Error, Result};
use crate::oracle::Eq3Factorization;
use crate::qop::{walsh_transform, DiagonalSignOperator, ParityPhaseGate};

/// The J-coupling gate `exp(-i pi/4 Z_k Z_l)` on an edge of `topo`.
fn j_gate(k: usize, l: usize, topo: &CouplingTopology) -> NativeGate {
    let duration = topo
        .coupling_hz(k, l)
        .map_or(0.0, |j| zz_duration(FRAC_PI_4, j));
    NativeGate::zz(k, l, FRAC_PI_4, duration)
}

/// CNOT on neighbouring spins:
///
/// `CNOT = e^{-i pi/4} Ry_t(pi/2) Rz_c(-pi/2) Rz_t(-pi/2) ZZ(pi/4) Ry_t(-pi/2)`.
pub fn compile_cnot(
    control: usize,
    target: usize,
    topo: &CouplingTopology,
) -> Result<PulseSequence> {
    topo.check_adjacent(control, target)?;
    let mut seq = PulseSequence::new(topo.num_spins());
    seq.push(NativeGate::rf(target, Axis::Y, -FRAC_PI_2));
    seq.push(j_gate(control, target, topo));
    seq.push(NativeGate::rf(control, Axis::Z, -FRAC_PI_2));
    seq.push(NativeGate::rf(target, Axis::Z, -FRAC_PI_2));
    seq.push(NativeGate::rf(target, Axis::Y, FRAC_PI_2));
    seq.global_phase = -FRAC_PI_4;
    seq.counts = ExpansionCounts { cnots: 1, swaps: 0 };
    Ok(seq)
}

/// SWAP on neighbouring spins as three alternating CNOTs.
pub fn compile_swap(k: usize, l: usize, topo: &CouplingTopology) -> Result<PulseSequence> {
    topo.check_adjacent(k, l)?;
    let mut seq = PulseSequence::new(topo.num_spins());
    seq.append(compile_cnot(k, l, topo)?);
    seq.append(compile_cnot(l, k, topo)?);
    seq.append(compile_cnot(k, l, topo)?);
    seq.counts.swaps += 1;
    Ok(seq)
}

/// Adjacent transpositions `(p, p+1)` that gather `support` into a contiguous
/// block starting at its lowest spin. Each later spin moves left until it sits
/// next to the block.
pub fn routing_swaps(support: &[usize]) -> Vec<usize> {
    let mut swaps = Vec::new();
    let Some((&anchor, rest)) = support.split_first() else {
        return swaps;
    };
    for (next, &q) in (anchor + 1..).zip(rest) {
        swaps.extend((next..q).rev());
    }
    swaps
}

/// `exp(i angle Z_S)`: route S into a contiguous block, fold its parity onto
/// the block's last spin with a CNOT ladder, rotate that spin about z by
/// `-2 angle`, then unfold and unroute.
pub fn compile_parity_phase(
    gate: &ParityPhaseGate,
    topo: &CouplingTopology,
) -> Result<PulseSequence> {
    let n = topo.num_spins();
    let support = gate.support();
    support.check_within(n)?;
    let qubits = support.qubits();
    let mut seq = PulseSequence::new(n);

    let swaps = routing_swaps(qubits);
    for &p in &swaps {
        seq.append(compile_swap(p, p + 1, topo)?);
    }

    let first = qubits[0];
    let last = first + qubits.len() - 1;
    for c in first..last {
        seq.append(compile_cnot(c, c + 1, topo)?);
    }
    seq.push(NativeGate::rf(last, Axis::Z, -2.0 * gate.angle));
    for c in (first..last).rev() {
        seq.append(compile_cnot(c, c + 1, topo)?);
    }

    for &p in swaps.iter().rev() {
        seq.append(compile_swap(p, p + 1, topo)?);
    }
    Ok(seq)
}

/// Compiles a ±1 diagonal through its Walsh terms:
/// `(-1)^f(x) = e^{i pi/2} prod_S exp(-i (pi/2) c_S Z_S)`.
pub fn compile_diagonal(
    d: &DiagonalSignOperator,
    topo: &CouplingTopology,
) -> Result<PulseSequence> {
    let n = d.num_qubits();
    if topo.num_spins() != n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: topo.num_spins(),
        });
    }
    let mut seq = PulseSequence::new(n);
    seq.global_phase = FRAC_PI_2;
    for term in walsh_transform(d) {
        let angle = -FRAC_PI_2 * term.coefficient;
        if term.support.is_empty() {
            seq.global_phase += angle;
        } else {
            seq.append(compile_parity_phase(
                &ParityPhaseGate::new(term.support, angle)?,
                topo,
            )?);
        }
    }
    Ok(seq)
}

/// Compiles the four-factor product form, keeping its global phase.
pub fn compile_factorization(
    f: &Eq3Factorization,
    topo: &CouplingTopology,
) -> Result<PulseSequence> {
    if topo.num_spins() != f.n {
        return Err(Error::DimensionMismatch {
            left: f.n,
            right: topo.num_spins(),
        });
    }
    let mut seq = PulseSequence::new(f.n);
    seq.global_phase = f.global_phase;
    for g in f.gates() {
        seq.append(compile_parity_phase(&g, topo)?);
    }
    Ok(seq)
}
