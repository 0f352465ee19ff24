use std::f64::consts::{FRAC_PI_2, PI};

use crate::qop::matrix::{Gate2, C64, ZERO};

/// Rotation axis of an RF gate.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Axis {
    /// Axis `(cos phi, sin phi, 0)` in the transverse plane.
    Transverse(f64),
    Z,
}

impl Axis {
    pub const X: Axis = Axis::Transverse(0.0);
    pub const Y: Axis = Axis::Transverse(FRAC_PI_2);

    /// `Some(true)` if the axes coincide, `Some(false)` if antiparallel, `None` otherwise.
    pub(crate) fn alignment(self, other: Axis) -> Option<bool> {
        match (self, other) {
            (Axis::Z, Axis::Z) => Some(true),
            (Axis::Transverse(a), Axis::Transverse(b)) => {
                let d = (a - b).rem_euclid(2.0 * PI);
                if d < 1e-12 || 2.0 * PI - d < 1e-12 {
                    Some(true)
                } else if (d - PI).abs() < 1e-12 {
                    Some(false)
                } else {
                    None
                }
            }
            _ => None,
        }
    }
}

/// Folds an RF angle into `(-2pi, 2pi]`. Rotations are 4pi-periodic, so this is exact.
pub fn normalize_rf_angle(angle: f64) -> f64 {
    let a = angle.rem_euclid(4.0 * PI);
    if a > 2.0 * PI {
        a - 4.0 * PI
    } else {
        a
    }
}

/// Native NMR operations: selective RF rotations and free J evolution between chain neighbours.
///
/// `Rf` implements `exp(-i angle (n . sigma) / 2)` on one spin; `Zz` implements
/// `exp(-i angle Z_k Z_l)` (a quarter-turn `angle = pi/4` is the J-coupling gate).
/// Spins are 1-based qubit indices.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NativeGate {
    Rf {
        spin: usize,
        axis: Axis,
        angle: f64,
    },
    Zz {
        k: usize,
        l: usize,
        angle: f64,
        duration_s: f64,
    },
}

impl NativeGate {
    pub fn rf(spin: usize, axis: Axis, angle: f64) -> Self {
        NativeGate::Rf {
            spin,
            axis,
            angle: normalize_rf_angle(angle),
        }
    }

    pub fn zz(k: usize, l: usize, angle: f64, duration_s: f64) -> Self {
        let (k, l) = if k < l { (k, l) } else { (l, k) };
        NativeGate::Zz {
            k,
            l,
            angle,
            duration_s,
        }
    }

    pub fn spins(&self) -> (usize, Option<usize>) {
        match *self {
            NativeGate::Rf { spin, .. } => (spin, None),
            NativeGate::Zz { k, l, .. } => (k, Some(l)),
        }
    }

    pub fn touches(&self, q: usize) -> bool {
        let (a, b) = self.spins();
        a == q || b == Some(q)
    }

    pub fn is_diagonal(&self) -> bool {
        matches!(
            self,
            NativeGate::Rf { axis: Axis::Z, .. } | NativeGate::Zz { .. }
        )
    }

    pub fn angle(&self) -> f64 {
        match *self {
            NativeGate::Rf { angle, .. } | NativeGate::Zz { angle, .. } => angle,
        }
    }

    /// Sufficient condition for the two gates to commute.
    pub fn commutes_with(&self, other: &NativeGate) -> bool {
        if self.is_diagonal() && other.is_diagonal() {
            return true;
        }
        let (a, b) = self.spins();
        !(other.touches(a) || b.is_some_and(|q| other.touches(q)))
    }
}

/// 2x2 matrix of an RF rotation.
pub fn rf_matrix(axis: Axis, angle: f64) -> Gate2 {
    let (s, c) = (angle / 2.0).sin_cos();
    match axis {
        Axis::Z => [
            [C64::from_polar(1.0, -angle / 2.0), ZERO],
            [ZERO, C64::from_polar(1.0, angle / 2.0)],
        ],
        Axis::Transverse(phi) => {
            let mi = C64::new(0.0, -s);
            [
                [C64::new(c, 0.0), mi * C64::from_polar(1.0, -phi)],
                [mi * C64::from_polar(1.0, phi), C64::new(c, 0.0)],
            ]
        }
    }
}

/// Gate action on an n-qubit register after fusing runs of diagonal gates.
#[derive(Clone, Debug)]
pub enum GateAction {
    OneQubit { qubit: usize, gate: Gate2 },
    Diagonal(Vec<C64>),
}

/// Expands a gate list into register actions. RF angles are multiplied by `rf_scale`.
pub(crate) fn gate_actions(gates: &[NativeGate], n: usize, rf_scale: f64) -> Vec<GateAction> {
    let dim = 1usize << n;
    let mut out = Vec::new();
    let mut pending: Option<Vec<C64>> = None;
    for g in gates {
        match *g {
            NativeGate::Rf {
                spin,
                axis: Axis::Transverse(phi),
                angle,
            } => {
                if let Some(d) = pending.take() {
                    out.push(GateAction::Diagonal(d));
                }
                out.push(GateAction::OneQubit {
                    qubit: spin,
                    gate: rf_matrix(Axis::Transverse(phi), angle * rf_scale),
                });
            }
            NativeGate::Rf {
                spin,
                axis: Axis::Z,
                angle,
            } => {
                let d = pending.get_or_insert_with(|| vec![C64::new(1.0, 0.0); dim]);
                let bit = 1 << (n - spin);
                let [p0, p1] = [
                    C64::from_polar(1.0, -angle * rf_scale / 2.0),
                    C64::from_polar(1.0, angle * rf_scale / 2.0),
                ];
                for (x, v) in d.iter_mut().enumerate() {
                    *v *= if x & bit == 0 { p0 } else { p1 };
                }
            }
            NativeGate::Zz { k, l, angle, .. } => {
                let d = pending.get_or_insert_with(|| vec![C64::new(1.0, 0.0); dim]);
                let mask = (1 << (n - k)) | (1 << (n - l));
                let same = C64::from_polar(1.0, -angle);
                let diff = C64::from_polar(1.0, angle);
                for (x, v) in d.iter_mut().enumerate() {
                    *v *= if (x & mask).count_ones().is_multiple_of(2) {
                        same
                    } else {
                        diff
                    };
                }
            }
        }
    }
    if let Some(d) = pending {
        out.push(GateAction::Diagonal(d));
    }
    out
}
