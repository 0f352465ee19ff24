use crate::compiler::{GateAction, PulseSequence};
use crate::error::{Error, Result};
use crate::qop::matrix::{check_qubit_count, qubit_bit, Gate2, Matrix, C64, ONE, ZERO};
use crate::spin_system::SpinSystem;

/// Tolerance used when validating externally supplied states.
pub const STATE_TOLERANCE: f64 = 1e-12;

/// Pulse-angle miscalibration: every RF rotation angle is multiplied by `1 + epsilon`.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct ImperfectionModel {
    epsilon: f64,
}

impl ImperfectionModel {
    pub fn new(epsilon: f64) -> Result<Self> {
        if epsilon.is_finite() && epsilon.abs() < 0.5 {
            Ok(ImperfectionModel { epsilon })
        } else {
            Err(Error::ImperfectionRange(epsilon))
        }
    }

    pub fn ideal() -> Self {
        ImperfectionModel::default()
    }

    pub fn epsilon(&self) -> f64 {
        self.epsilon
    }

    pub fn is_ideal(&self) -> bool {
        self.epsilon == 0.0
    }

    pub fn rf_scale(&self) -> f64 {
        1.0 + self.epsilon
    }
}

/// Something a pulse sequence or a unitary can act on.
pub trait QuantumState: Clone {
    fn num_qubits(&self) -> usize;
    fn apply_action(&mut self, action: &GateAction);
    fn apply_unitary(&mut self, u: &Matrix) -> Result<()>;
    /// Multiplies the state by `e^{i phase}`; a no-op on density matrices.
    fn apply_global_phase(&mut self, phase: f64);
}

/// What [`apply`] evolves a state with.
#[derive(Clone, Copy, Debug)]
pub enum Evolution<'a> {
    Pulses(&'a PulseSequence),
    Unitary(&'a Matrix),
}

impl<'a> From<&'a PulseSequence> for Evolution<'a> {
    fn from(p: &'a PulseSequence) -> Self {
        Evolution::Pulses(p)
    }
}

impl<'a> From<&'a Matrix> for Evolution<'a> {
    fn from(u: &'a Matrix) -> Self {
        Evolution::Unitary(u)
    }
}

/// Evolves `state`. RF angles of a pulse sequence are scaled by the imperfection model;
/// a dense unitary is applied as given.
pub fn apply<'a, S: QuantumState>(
    evolution: impl Into<Evolution<'a>>,
    state: &S,
    model: &ImperfectionModel,
) -> Result<S> {
    let mut out = state.clone();
    match evolution.into() {
        Evolution::Pulses(ps) => {
            if ps.num_qubits() != state.num_qubits() {
                return Err(Error::DimensionMismatch {
                    left: ps.num_qubits(),
                    right: state.num_qubits(),
                });
            }
            for action in ps.actions(model.rf_scale()) {
                out.apply_action(&action);
            }
            out.apply_global_phase(ps.global_phase);
        }
        Evolution::Unitary(u) => out.apply_unitary(u)?,
    }
    Ok(out)
}

/// Normalized pure state of an n-qubit register.
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<C64>,
}

impl StateVector {
    /// `|0...0>`.
    pub fn zero(n: usize) -> Result<Self> {
        check_qubit_count(n)?;
        let mut amps = vec![ZERO; 1 << n];
        amps[0] = ONE;
        Ok(StateVector { n, amps })
    }

    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let n = amps.len().trailing_zeros() as usize;
        if !amps.len().is_power_of_two() {
            return Err(Error::DimensionMismatch {
                left: amps.len(),
                right: 1 << n,
            });
        }
        check_qubit_count(n)?;
        let s = StateVector { n, amps };
        let norm = s.norm();
        if (norm - 1.0).abs() > STATE_TOLERANCE {
            return Err(Error::Parse(format!("state norm {norm} is not 1")));
        }
        Ok(s)
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

impl QuantumState for StateVector {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply_action(&mut self, action: &GateAction) {
        match action {
            GateAction::OneQubit { qubit, gate } => {
                apply_1q(&mut self.amps, gate, qubit_bit(*qubit, self.n))
            }
            GateAction::Diagonal(d) => self.amps.iter_mut().zip(d).for_each(|(a, p)| *a *= p),
        }
    }

    fn apply_unitary(&mut self, u: &Matrix) -> Result<()> {
        if u.dim() != self.amps.len() {
            return Err(Error::DimensionMismatch {
                left: u.dim(),
                right: self.amps.len(),
            });
        }
        self.amps = u
            .as_array()
            .dot(&ndarray::ArrayView1::from(&self.amps))
            .to_vec();
        Ok(())
    }

    fn apply_global_phase(&mut self, phase: f64) {
        let p = C64::from_polar(1.0, phase);
        self.amps.iter_mut().for_each(|a| *a *= p);
    }
}

fn apply_1q(amps: &mut [C64], g: &Gate2, bit: usize) {
    for i0 in (0..amps.len()).filter(|i| i & bit == 0) {
        let i1 = i0 | bit;
        let (a, b) = (amps[i0], amps[i1]);
        amps[i0] = g[0][0] * a + g[0][1] * b;
        amps[i1] = g[1][0] * a + g[1][1] * b;
    }
}

/// Traceless deviation part of a high-temperature NMR density matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct DeviationDensityMatrix {
    n: usize,
    rho: Matrix,
}

impl DeviationDensityMatrix {
    /// Validates Hermiticity and tracelessness to `1e-12` (relative to the largest entry).
    pub fn new(rho: Matrix) -> Result<Self> {
        let n = rho.num_qubits().ok_or(Error::DimensionMismatch {
            left: rho.dim(),
            right: 0,
        })?;
        check_qubit_count(n)?;
        let s = DeviationDensityMatrix { n, rho };
        if !s.is_valid(STATE_TOLERANCE) {
            return Err(Error::Parse(
                "deviation matrix must be Hermitian and traceless".into(),
            ));
        }
        Ok(s)
    }

    pub fn matrix(&self) -> &Matrix {
        &self.rho
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.rho.get(i, j)
    }

    /// Hermitian and traceless within `tol` times the largest entry (or absolute if that is below 1).
    pub fn is_valid(&self, tol: f64) -> bool {
        let scale = self
            .rho
            .as_array()
            .iter()
            .map(|z| z.norm())
            .fold(1.0, f64::max);
        self.rho.is_hermitian(tol * scale) && self.rho.trace().norm() <= tol * scale
    }

    /// `alpha * self + beta * other`.
    pub fn combine(&self, alpha: f64, other: &Self, beta: f64) -> Result<Self> {
        let a = self.rho.scale(C64::new(alpha, 0.0));
        let b = other.rho.scale(C64::new(beta, 0.0));
        Ok(DeviationDensityMatrix {
            n: self.n,
            rho: a.add(&b)?,
        })
    }
}

impl QuantumState for DeviationDensityMatrix {
    fn num_qubits(&self) -> usize {
        self.n
    }

    fn apply_action(&mut self, action: &GateAction) {
        match action {
            GateAction::OneQubit { qubit, gate } => {
                self.rho.left_apply_1q(gate, *qubit, self.n);
                self.rho.right_apply_1q_adjoint(gate, *qubit, self.n);
            }
            GateAction::Diagonal(d) => self.rho.conjugate_diagonal(d),
        }
    }

    fn apply_unitary(&mut self, u: &Matrix) -> Result<()> {
        self.rho = u.matmul(&self.rho)?.matmul(&u.adjoint())?;
        Ok(())
    }

    fn apply_global_phase(&mut self, _phase: f64) {}
}

/// High-temperature equilibrium deviation `sum_k gamma_k Z_k`.
pub fn thermal_state(system: &SpinSystem) -> DeviationDensityMatrix {
    let n = system.len();
    let gammas = system.gammas();
    let diag: Vec<C64> = (0..1usize << n)
        .map(|x| {
            let v: f64 = gammas
                .iter()
                .enumerate()
                .map(|(i, g)| {
                    if x & qubit_bit(i + 1, n) == 0 {
                        *g
                    } else {
                        -*g
                    }
                })
                .sum();
            C64::new(v, 0.0)
        })
        .collect();
    DeviationDensityMatrix {
        n,
        rho: Matrix::from_diagonal(&diag),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::compiler::{Axis, NativeGate};
    use crate::qop::{kron_chain, pauli};
    use crate::spin_system::Spin;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

    fn system(gammas: &[f64]) -> SpinSystem {
        let n = gammas.len();
        let spins = gammas
            .iter()
            .enumerate()
            .map(|(i, &g)| Spin::new(&format!("S{}", i + 1), "1H", 10.0 * i as f64, g))
            .collect();
        let j = (0..n)
            .map(|k| {
                (0..n)
                    .map(|l| if k.abs_diff(l) == 1 { 5.0 } else { 0.0 })
                    .collect()
            })
            .collect();
        SpinSystem::new(spins, j, "").unwrap()
    }

    fn real_diag(rho: &DeviationDensityMatrix) -> Vec<f64> {
        rho.matrix().diagonal().iter().map(|z| z.re).collect()
    }

    /// Deterministic Hermitian traceless matrix.
    fn sample_rho(n: usize) -> DeviationDensityMatrix {
        let dim = 1 << n;
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let v = C64::new(
                    ((i * 7 + j * 3) % 11) as f64 - 5.0,
                    if i == j {
                        0.0
                    } else {
                        ((i + 2 * j) % 5) as f64 - 2.0
                    },
                );
                m.set(i, j, v);
                m.set(j, i, v.conj());
            }
        }
        let shift = m.trace().re / dim as f64;
        for i in 0..dim {
            m.set(i, i, m.get(i, i) - shift);
        }
        DeviationDensityMatrix::new(m).unwrap()
    }

    #[test]
    fn thermal_examples() {
        assert_eq!(real_diag(&thermal_state(&system(&[1.0]))), vec![1.0, -1.0]);
        assert_eq!(
            real_diag(&thermal_state(&system(&[1.0, 0.25]))),
            vec![1.25, 0.75, -0.75, -1.25]
        );
    }

    #[test]
    fn thermal_crotonic_structure() {
        let sys = SpinSystem::crotonic_acid();
        let rho = thermal_state(&sys);
        assert!(rho.is_valid(1e-12));
        assert!(rho.matrix().is_diagonal(0.0));
        // Against the Kronecker-product definition.
        let mut sum = Matrix::zeros(128);
        for (k, g) in sys.gammas().iter().enumerate() {
            let factors: Vec<Matrix> = (0..7)
                .map(|i| {
                    if i == k {
                        pauli::z()
                    } else {
                        pauli::identity()
                    }
                })
                .collect();
            sum = sum
                .add(&kron_chain(&factors).unwrap().scale(C64::new(*g, 0.0)))
                .unwrap();
        }
        assert!(rho.matrix().max_abs_diff(&sum).unwrap() < 1e-12);
        // Tr(rho^2) = 2^n sum_k gamma_k^2, since the Z_k are trace-orthogonal.
        let purity = rho.matrix().matmul(rho.matrix()).unwrap().trace().re;
        let want = 128.0 * sys.gammas().iter().map(|g| g * g).sum::<f64>();
        assert!((purity - want).abs() < 1e-9);
    }

    #[test]
    fn empty_sequence_leaves_state_alone() {
        let rho = sample_rho(2);
        let out = apply(&PulseSequence::new(2), &rho, &ImperfectionModel::ideal()).unwrap();
        assert_eq!(out, rho);
    }

    #[test]
    fn two_quarter_turns_equal_one_half_turn() {
        let rho = sample_rho(3);
        let mut a = PulseSequence::new(3);
        a.push(NativeGate::zz(1, 2, FRAC_PI_4, 0.0));
        a.push(NativeGate::zz(1, 2, FRAC_PI_4, 0.0));
        let mut b = PulseSequence::new(3);
        b.push(NativeGate::zz(1, 2, FRAC_PI_2, 0.0));
        let m = ImperfectionModel::ideal();
        let ra = apply(&a, &rho, &m).unwrap();
        let rb = apply(&b, &rho, &m).unwrap();
        assert!(ra.matrix().max_abs_diff(rb.matrix()).unwrap() < 1e-12);
    }

    #[test]
    fn sequence_and_dense_unitary_agree() {
        let rho = sample_rho(3);
        let mut s = PulseSequence::new(3);
        s.push(NativeGate::rf(2, Axis::Y, 0.4));
        s.push(NativeGate::zz(2, 3, FRAC_PI_4, 0.0));
        s.push(NativeGate::rf(1, Axis::Transverse(0.3), -1.1));
        s.push(NativeGate::rf(3, Axis::Z, 0.9));
        let m = ImperfectionModel::ideal();
        let a = apply(&s, &rho, &m).unwrap();
        let u = s.unitary().unwrap();
        let b = apply(&u, &rho, &m).unwrap();
        assert!(a.matrix().max_abs_diff(b.matrix()).unwrap() < 1e-12);

        let psi = StateVector::zero(3).unwrap();
        let va = apply(&s, &psi, &m).unwrap();
        let vb = apply(&u, &psi, &m).unwrap();
        assert!(va
            .amplitudes()
            .iter()
            .zip(vb.amplitudes())
            .all(|(x, y)| (x - y).norm() < 1e-12));
        assert!((va.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn imperfection_scales_rotation() {
        let mut s = PulseSequence::new(1);
        s.push(NativeGate::rf(1, Axis::Y, FRAC_PI_2));
        let model = ImperfectionModel::new(0.02).unwrap();
        let out = apply(&s, &StateVector::zero(1).unwrap(), &model).unwrap();
        // Ry(0.51 pi)|0> = cos(0.255 pi)|0> + sin(0.255 pi)|1>
        let a = out.amplitudes();
        assert!((a[0].re - (0.255 * PI).cos()).abs() < 1e-14);
        assert!((a[1].re - (0.255 * PI).sin()).abs() < 1e-14);
    }

    #[test]
    fn imperfection_range() {
        assert!(ImperfectionModel::new(0.49).is_ok());
        assert_eq!(
            ImperfectionModel::new(0.5),
            Err(Error::ImperfectionRange(0.5))
        );
        assert!(ImperfectionModel::new(f64::NAN).is_err());
    }

    #[test]
    fn dimension_mismatch() {
        let r = apply(
            &PulseSequence::new(3),
            &sample_rho(2),
            &ImperfectionModel::ideal(),
        );
        assert!(matches!(r, Err(Error::DimensionMismatch { .. })));
        let r = apply(
            &Matrix::identity(8),
            &StateVector::zero(2).unwrap(),
            &ImperfectionModel::ideal(),
        );
        assert!(r.is_err());
    }

    #[test]
    fn rejects_invalid_states() {
        let mut m = Matrix::zeros(2);
        m.set(0, 0, C64::new(1.0, 0.0));
        assert!(DeviationDensityMatrix::new(m).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ONE]).is_err());
        assert!(StateVector::from_amplitudes(vec![ONE, ZERO, ZERO]).is_err());
    }
}
