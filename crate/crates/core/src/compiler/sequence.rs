use std::fmt::Write as _;

use super::gate::{gate_actions, Axis, GateAction, NativeGate};
use super::topology::CouplingTopology;
use crate::error::{Error, Result};
use crate::qop::matrix::{check_qubit, check_qubit_count, Matrix, C64};

/// Macro expansions emitted while building a sequence. Peephole passes leave these alone.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ExpansionCounts {
    /// CNOT expansions, including the three inside each SWAP.
    pub cnots: usize,
    pub swaps: usize,
}

impl std::ops::AddAssign for ExpansionCounts {
    fn add_assign(&mut self, rhs: Self) {
        self.cnots += rhs.cnots;
        self.swaps += rhs.swaps;
    }
}

/// Ordered native gates (first gate acts first) plus a tracked global phase, so
/// that `e^{i global_phase} * G_last ... G_first` is the implemented unitary.
#[derive(Clone, Debug, PartialEq)]
pub struct PulseSequence {
    n: usize,
    pub gates: Vec<NativeGate>,
    pub global_phase: f64,
    pub counts: ExpansionCounts,
}

impl PulseSequence {
    pub fn new(n: usize) -> Self {
        PulseSequence {
            n,
            gates: Vec::new(),
            global_phase: 0.0,
            counts: ExpansionCounts::default(),
        }
    }

    pub fn num_qubits(&self) -> usize {
        self.n
    }

    pub fn push(&mut self, gate: NativeGate) {
        self.gates.push(gate);
    }

    pub fn append(&mut self, other: PulseSequence) {
        debug_assert_eq!(self.n, other.n);
        self.gates.extend(other.gates);
        self.global_phase += other.global_phase;
        self.counts += other.counts;
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn zz_count(&self) -> usize {
        self.gates
            .iter()
            .filter(|g| matches!(g, NativeGate::Zz { .. }))
            .count()
    }

    pub fn rf_count(&self) -> usize {
        self.gates.len() - self.zz_count()
    }

    /// Structural check: spins in range and every ZZ gate on a chain edge.
    pub fn check_topology(&self, topo: &CouplingTopology) -> Result<()> {
        if topo.num_spins() != self.n {
            return Err(Error::DimensionMismatch {
                left: self.n,
                right: topo.num_spins(),
            });
        }
        for g in &self.gates {
            match *g {
                NativeGate::Rf { spin, .. } => check_qubit(spin, self.n)?,
                NativeGate::Zz { k, l, .. } => topo.check_adjacent(k, l)?,
            }
        }
        Ok(())
    }

    pub(crate) fn actions(&self, rf_scale: f64) -> Vec<GateAction> {
        gate_actions(&self.gates, self.n, rf_scale)
    }

    /// Dense unitary of the sequence with every RF angle multiplied by `rf_scale`.
    pub fn unitary_scaled(&self, rf_scale: f64) -> Result<Matrix> {
        check_qubit_count(self.n)?;
        let mut m = Matrix::identity(1 << self.n);
        for action in self.actions(rf_scale) {
            match action {
                GateAction::OneQubit { qubit, gate } => m.left_apply_1q(&gate, qubit, self.n),
                GateAction::Diagonal(d) => m.left_apply_diagonal(&d),
            }
        }
        Ok(m.scale(C64::from_polar(1.0, self.global_phase)))
    }

    pub fn unitary(&self) -> Result<Matrix> {
        self.unitary_scaled(1.0)
    }

    /// Line-oriented text form:
    ///
    /// ```text
    /// # n=<n> global_phase=<rad>
    /// RF <spin> <axis_phi_rad | z> <angle_rad>
    /// ZZ <k> <l> <angle_rad> <duration_s>
    /// ```
    ///
    /// Reals are written with 17 significant digits, which round-trips every `f64`.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        writeln!(s, "# n={} global_phase={}", self.n, real(self.global_phase)).unwrap();
        for g in &self.gates {
            match *g {
                NativeGate::Rf {
                    spin,
                    axis: Axis::Z,
                    angle,
                } => writeln!(s, "RF {spin} z {}", real(angle)).unwrap(),
                NativeGate::Rf {
                    spin,
                    axis: Axis::Transverse(phi),
                    angle,
                } => writeln!(s, "RF {spin} {} {}", real(phi), real(angle)).unwrap(),
                NativeGate::Zz {
                    k,
                    l,
                    angle,
                    duration_s,
                } => writeln!(s, "ZZ {k} {l} {} {}", real(angle), real(duration_s)).unwrap(),
            }
        }
        s
    }

    pub fn from_text(text: &str) -> Result<Self> {
        let mut lines = text
            .lines()
            .enumerate()
            .filter(|(_, l)| !l.trim().is_empty());
        let (_, header) = lines
            .next()
            .ok_or_else(|| format_err(1, "missing header"))?;
        let (n, global_phase) = parse_header(header)?;
        let mut seq = PulseSequence::new(n);
        seq.global_phase = global_phase;
        for (i, line) in lines {
            let lineno = i + 1;
            let fields: Vec<&str> = line.split_whitespace().collect();
            if fields[0].starts_with('#') {
                continue;
            }
            let int = |s: &str| -> Result<usize> {
                s.parse()
                    .map_err(|_| format_err(lineno, &format!("bad spin index `{s}`")))
            };
            let num = |s: &str| -> Result<f64> {
                s.parse()
                    .map_err(|_| format_err(lineno, &format!("bad number `{s}`")))
            };
            let gate = match fields.as_slice() {
                ["RF", spin, axis, angle] => {
                    let axis = if axis.eq_ignore_ascii_case("z") {
                        Axis::Z
                    } else {
                        Axis::Transverse(num(axis)?)
                    };
                    NativeGate::Rf {
                        spin: int(spin)?,
                        axis,
                        angle: num(angle)?,
                    }
                }
                ["ZZ", k, l, angle, duration] => NativeGate::Zz {
                    k: int(k)?,
                    l: int(l)?,
                    angle: num(angle)?,
                    duration_s: num(duration)?,
                },
                _ => {
                    return Err(format_err(
                        lineno,
                        "expected `RF spin axis angle` or `ZZ k l angle duration`",
                    ))
                }
            };
            let (a, b) = gate.spins();
            for q in std::iter::once(a).chain(b) {
                check_qubit(q, n).map_err(|e| format_err(lineno, &e.to_string()))?;
            }
            seq.push(gate);
        }
        Ok(seq)
    }
}

fn real(x: f64) -> String {
    format!("{x:.16e}")
}

fn format_err(line: usize, message: &str) -> Error {
    Error::SequenceFormat {
        line,
        message: message.to_string(),
    }
}

fn parse_header(line: &str) -> Result<(usize, f64)> {
    let rest = line
        .trim()
        .strip_prefix('#')
        .ok_or_else(|| format_err(1, "header must start with `#`"))?;
    let mut n = None;
    let mut phase = None;
    for field in rest.split_whitespace() {
        match field.split_once('=') {
            Some(("n", v)) => n = v.parse::<usize>().ok(),
            Some(("global_phase", v)) => phase = v.parse::<f64>().ok(),
            _ => {}
        }
    }
    match (n, phase) {
        (Some(n), Some(p)) => {
            check_qubit_count(n).map_err(|e| format_err(1, &e.to_string()))?;
            Ok((n, p))
        }
        _ => Err(format_err(1, "header needs `n=<int> global_phase=<real>`")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn sample() -> PulseSequence {
        let mut s = PulseSequence::new(3);
        s.global_phase = -FRAC_PI_4;
        s.push(NativeGate::rf(2, Axis::Y, -FRAC_PI_2));
        s.push(NativeGate::zz(2, 3, FRAC_PI_4, 1.0 / 14.0));
        s.push(NativeGate::rf(3, Axis::Z, 0.1));
        s.push(NativeGate::rf(1, Axis::Transverse(PI / 3.0), 1.0 / 3.0));
        s
    }

    #[test]
    fn text_roundtrip_is_bit_exact() {
        let s = sample();
        let text = s.to_text();
        assert!(text.starts_with("# n=3 global_phase=-7.8539816339744828e-1\n"));
        assert!(text.contains("\nRF 3 z 1.0000000000000001e-1\n"));
        let back = PulseSequence::from_text(&text).unwrap();
        assert_eq!(back.gates, s.gates);
        assert_eq!(back.global_phase.to_bits(), s.global_phase.to_bits());
    }

    #[test]
    fn text_errors() {
        assert!(matches!(
            PulseSequence::from_text(""),
            Err(Error::SequenceFormat { line: 1, .. })
        ));
        assert!(PulseSequence::from_text("# n=2\n").is_err());
        let bad = "# n=2 global_phase=0\nRF 3 z 1.0\n";
        assert!(matches!(
            PulseSequence::from_text(bad),
            Err(Error::SequenceFormat { line: 2, .. })
        ));
        let bad = "# n=2 global_phase=0\nXY 1 2\n";
        assert!(PulseSequence::from_text(bad).is_err());
    }

    #[test]
    fn topology_check() {
        let s = sample();
        assert!(s.check_topology(&CouplingTopology::path(3)).is_ok());
        let mut bad = PulseSequence::new(3);
        bad.push(NativeGate::zz(1, 3, FRAC_PI_4, 0.0));
        assert_eq!(
            bad.check_topology(&CouplingTopology::path(3)),
            Err(Error::NotAdjacent(1, 3))
        );
    }

    #[test]
    fn empty_sequence_is_identity() {
        let s = PulseSequence::new(2);
        assert_eq!(s.unitary().unwrap(), Matrix::identity(4));
        assert_eq!((s.rf_count(), s.zz_count()), (0, 0));
    }
}
