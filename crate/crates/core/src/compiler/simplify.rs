//! Peephole simplification.
//!
//! Each incoming gate looks backwards past gates it commutes with for a
//! partner: RF rotations on the same spin about the same (or opposite) axis
//! merge, ZZ gates on the same pair cancel when their angles sum to zero.
//! Zero rotations are dropped, and a full 2pi RF turn is replaced by a global
//! phase of pi. Passes repeat until nothing changes.

use std::f64::consts::PI;

use super::gate::{normalize_rf_angle, NativeGate};
use super::sequence::PulseSequence;

const ZERO_ANGLE: f64 = 1e-14;

pub fn simplify(seq: &PulseSequence) -> PulseSequence {
    let mut out = seq.clone();
    loop {
        let before = out.gates.len();
        let (gates, phase) = pass(&out.gates);
        out.gates = gates;
        out.global_phase += phase;
        if out.gates.len() == before {
            return out;
        }
    }
}

fn pass(gates: &[NativeGate]) -> (Vec<NativeGate>, f64) {
    let mut out: Vec<NativeGate> = Vec::with_capacity(gates.len());
    let mut phase = 0.0;
    for &g in gates {
        let (g, extra) = reduce_trivial(g);
        phase += extra;
        let Some(g) = g else { continue };

        let mut merged = false;
        for j in (0..out.len()).rev() {
            if let Some(m) = merge(&out[j], &g) {
                let (m, extra) = reduce_trivial(m);
                phase += extra;
                match m {
                    Some(m) => out[j] = m,
                    None => {
                        out.remove(j);
                    }
                }
                merged = true;
                break;
            }
            if !out[j].commutes_with(&g) {
                break;
            }
        }
        if !merged {
            out.push(g);
        }
    }
    (out, phase)
}

/// Drops identity gates; a 2pi RF rotation is `-I`, returned as a phase of pi.
fn reduce_trivial(g: NativeGate) -> (Option<NativeGate>, f64) {
    match g {
        NativeGate::Rf { angle, .. } => {
            let a = normalize_rf_angle(angle);
            if a.abs() < ZERO_ANGLE {
                (None, 0.0)
            } else if (a - 2.0 * PI).abs() < ZERO_ANGLE {
                (None, PI)
            } else {
                (Some(g), 0.0)
            }
        }
        NativeGate::Zz { angle, .. } if angle.abs() < ZERO_ANGLE => (None, 0.0),
        _ => (Some(g), 0.0),
    }
}

fn merge(a: &NativeGate, b: &NativeGate) -> Option<NativeGate> {
    match (*a, *b) {
        (
            NativeGate::Rf {
                spin: s1,
                axis: a1,
                angle: t1,
            },
            NativeGate::Rf {
                spin: s2,
                axis: a2,
                angle: t2,
            },
        ) if s1 == s2 => {
            let sign = if a1.alignment(a2)? { 1.0 } else { -1.0 };
            Some(NativeGate::rf(s1, a1, t1 + sign * t2))
        }
        (
            NativeGate::Zz {
                k: k1,
                l: l1,
                angle: t1,
                ..
            },
            NativeGate::Zz {
                k: k2,
                l: l2,
                angle: t2,
                ..
            },
        ) if (k1, l1) == (k2, l2) && (t1 + t2).abs() < ZERO_ANGLE => {
            Some(NativeGate::zz(k1, l1, 0.0, 0.0))
        }
        _ => None,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::gate::Axis;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4};

    fn seq(gates: Vec<NativeGate>) -> PulseSequence {
        let mut s = PulseSequence::new(2);
        s.gates = gates;
        s
    }

    #[test]
    fn inverse_pair_cancels() {
        let s = seq(vec![
            NativeGate::rf(1, Axis::Z, FRAC_PI_2),
            NativeGate::rf(1, Axis::Z, -FRAC_PI_2),
        ]);
        assert!(simplify(&s).is_empty());
    }

    #[test]
    fn same_axis_rotations_merge() {
        let s = seq(vec![
            NativeGate::rf(1, Axis::Z, FRAC_PI_4),
            NativeGate::rf(1, Axis::Z, FRAC_PI_4),
        ]);
        assert_eq!(
            simplify(&s).gates,
            vec![NativeGate::rf(1, Axis::Z, FRAC_PI_2)]
        );
    }

    #[test]
    fn merges_across_commuting_gates_only() {
        let s = seq(vec![
            NativeGate::rf(1, Axis::Z, 0.3),
            NativeGate::zz(1, 2, FRAC_PI_4, 0.0),
            NativeGate::rf(1, Axis::Z, 0.2),
        ]);
        let out = simplify(&s);
        assert_eq!(out.len(), 2);
        let blocked = seq(vec![
            NativeGate::rf(1, Axis::Z, 0.3),
            NativeGate::rf(1, Axis::Y, 0.1),
            NativeGate::rf(1, Axis::Z, 0.2),
        ]);
        assert_eq!(simplify(&blocked).len(), 3);
    }

    #[test]
    fn opposite_axes_cancel() {
        let s = seq(vec![
            NativeGate::rf(2, Axis::Y, 0.7),
            NativeGate::rf(2, Axis::Transverse(-FRAC_PI_2), 0.7),
        ]);
        assert!(simplify(&s).is_empty());
    }

    #[test]
    fn full_turn_becomes_global_phase() {
        let s = seq(vec![
            NativeGate::rf(1, Axis::Y, PI),
            NativeGate::rf(1, Axis::Y, PI),
        ]);
        let out = simplify(&s);
        assert!(out.is_empty());
        assert_eq!(out.global_phase, PI);
        assert!(
            out.unitary()
                .unwrap()
                .max_abs_diff(&s.unitary().unwrap())
                .unwrap()
                < 1e-15
        );
    }

    #[test]
    fn zz_inverse_pair_cancels() {
        let s = seq(vec![
            NativeGate::zz(1, 2, 0.4, 0.0),
            NativeGate::zz(1, 2, -0.4, 0.0),
        ]);
        assert!(simplify(&s).is_empty());
    }
}
