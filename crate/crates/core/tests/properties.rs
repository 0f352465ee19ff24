use std::f64::consts::PI;

use nmrdj::compiler::{
    compile_diagonal, compile_parity_phase, simplify, Axis, CouplingTopology, NativeGate,
    PulseSequence,
};
use nmrdj::qop::{
    global_phase_fidelity, parity_phase_unitary, walsh_reconstruct, walsh_transform,
    DiagonalSignOperator, Matrix, ParityPhaseGate, Support, C64,
};
use nmrdj::simulator::{
    apply, readout_spectrum, DeviationDensityMatrix, ImperfectionModel, StateVector,
};
use nmrdj::spin_system::{Spin, SpinSystem};
use proptest::prelude::*;

fn signs(n: usize) -> impl Strategy<Value = DiagonalSignOperator> {
    prop::collection::vec(any::<bool>(), 1 << n).prop_map(move |v| {
        DiagonalSignOperator::new(n, v.iter().map(|&b| if b { -1 } else { 1 }).collect()).unwrap()
    })
}

fn support(n: usize) -> impl Strategy<Value = Support> {
    prop::collection::vec(any::<bool>(), n)
        .prop_filter("nonempty", |v| v.iter().any(|&b| b))
        .prop_map(|v| Support::new(v.iter().enumerate().filter(|(_, &b)| b).map(|(i, _)| i + 1)))
}

fn gate(n: usize) -> impl Strategy<Value = NativeGate> {
    let axis = prop_oneof![
        Just(Axis::Z),
        Just(Axis::X),
        Just(Axis::Y),
        Just(Axis::Transverse(-PI / 2.0)),
        (-PI..PI).prop_map(Axis::Transverse),
    ];
    let angle = prop_oneof![(-4i32..=4).prop_map(|k| k as f64 * PI / 4.0), -7.0..7.0f64,];
    prop_oneof![
        (1..=n, axis, angle.clone()).prop_map(|(s, a, t)| NativeGate::rf(s, a, t)),
        (1..n, angle, 0.0..1.0f64).prop_map(|(k, t, d)| NativeGate::zz(k, k + 1, t, d)),
    ]
}

fn sequence(n: usize, max_len: usize) -> impl Strategy<Value = PulseSequence> {
    (prop::collection::vec(gate(n), 0..max_len), -PI..PI).prop_map(move |(gates, phase)| {
        let mut s = PulseSequence::new(n);
        s.gates = gates;
        s.global_phase = phase;
        s
    })
}

fn hermitian_traceless(n: usize) -> impl Strategy<Value = DeviationDensityMatrix> {
    let dim = 1usize << n;
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), dim * dim).prop_map(move |v| {
        let mut m = Matrix::zeros(dim);
        for i in 0..dim {
            for j in i..dim {
                let (re, im) = v[i * dim + j];
                let z = if i == j {
                    C64::new(re, 0.0)
                } else {
                    C64::new(re, im)
                };
                m.set(i, j, z);
                m.set(j, i, z.conj());
            }
        }
        let shift = m.trace().re / dim as f64;
        for i in 0..dim {
            m.set(i, i, m.get(i, i) - shift);
        }
        DeviationDensityMatrix::new(m).unwrap()
    })
}

fn spin_system(n: usize) -> impl Strategy<Value = SpinSystem> {
    (
        prop::collection::vec(
            (
                -500.0..500.0f64,
                0.1..5.0f64,
                prop_oneof![Just(1u32), Just(3u32)],
            ),
            n,
        ),
        prop::collection::vec(prop_oneof![Just(0.0), 0.5..80.0f64], n * n),
    )
        .prop_map(move |(spins, js)| {
            let spins = spins
                .into_iter()
                .enumerate()
                .map(|(i, (shift, gamma, m))| {
                    Spin::new(&format!("X{i}"), "1H", shift, gamma).with_multiplicity(m)
                })
                .collect();
            let mut j = vec![vec![0.0; n]; n];
            for k in 0..n {
                for l in k + 1..n {
                    let v = if l == k + 1 {
                        js[k * n + l].max(1.0)
                    } else {
                        js[k * n + l]
                    };
                    j[k][l] = v;
                    j[l][k] = v;
                }
            }
            SpinSystem::new(spins, j, "generated").unwrap()
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn walsh_roundtrip_seven_qubits(d in signs(7)) {
        let terms = walsh_transform(&d);
        prop_assert_eq!(walsh_reconstruct(&terms, 7).unwrap(), d);
        let parseval: f64 = terms.iter().map(|t| t.coefficient * t.coefficient).sum();
        prop_assert!((parseval - 1.0).abs() < 1e-12);
    }

    #[test]
    fn parity_gates_commute(s1 in support(5), s2 in support(5), a in -PI..PI, b in -PI..PI) {
        let g1 = parity_phase_unitary(&ParityPhaseGate::new(s1.clone(), a).unwrap(), 5).unwrap();
        let g2 = parity_phase_unitary(&ParityPhaseGate::new(s2, b).unwrap(), 5).unwrap();
        let d = g1.matmul(&g2).unwrap().max_abs_diff(&g2.matmul(&g1).unwrap()).unwrap();
        prop_assert!(d < 1e-12);
        let g1b = parity_phase_unitary(&ParityPhaseGate::new(s1.clone(), b).unwrap(), 5).unwrap();
        let sum = parity_phase_unitary(&ParityPhaseGate::new(s1, a + b).unwrap(), 5).unwrap();
        prop_assert!(g1.matmul(&g1b).unwrap().max_abs_diff(&sum).unwrap() < 1e-12);
    }

    #[test]
    fn compiled_parity_gates_are_exact(n in 1usize..=7, bits in prop::collection::vec(any::<bool>(), 7), angle in -PI..PI) {
        let mut qs: Vec<usize> = (1..=n).filter(|&q| bits[q - 1]).collect();
        if qs.is_empty() {
            qs.push(n);
        }
        let g = ParityPhaseGate::new(Support::new(qs), angle).unwrap();
        let topo = CouplingTopology::path(n);
        let seq = compile_parity_phase(&g, &topo).unwrap();
        seq.check_topology(&topo).unwrap();
        let u = seq.unitary().unwrap();
        let target = parity_phase_unitary(&g, n).unwrap();
        prop_assert!(global_phase_fidelity(&u, &target).unwrap() >= 1.0 - 1e-10);
        prop_assert!(u.max_abs_diff(&target).unwrap() < 1e-10);
    }

    #[test]
    fn compiled_diagonals_are_exact(d in (2usize..=4).prop_flat_map(signs)) {
        let n = d.num_qubits();
        let topo = CouplingTopology::path(n);
        let u = compile_diagonal(&d, &topo).unwrap().unitary().unwrap();
        prop_assert!(u.max_abs_diff(&d.to_matrix()).unwrap() < 1e-10);
    }

    #[test]
    fn simplify_preserves_the_unitary(seq in sequence(3, 40)) {
        let out = simplify(&seq);
        prop_assert!(out.len() <= seq.len());
        prop_assert_eq!(out.counts, seq.counts);
        let d = out.unitary().unwrap().max_abs_diff(&seq.unitary().unwrap()).unwrap();
        prop_assert!(d < 1e-10, "difference {}", d);
    }

    #[test]
    fn sequence_text_roundtrip(seq in sequence(4, 30)) {
        let back = PulseSequence::from_text(&seq.to_text()).unwrap();
        prop_assert_eq!(back.gates, seq.gates);
        prop_assert_eq!(back.global_phase.to_bits(), seq.global_phase.to_bits());
    }

    #[test]
    fn spin_system_json_roundtrip(sys in (1usize..=7).prop_flat_map(spin_system)) {
        prop_assert_eq!(SpinSystem::from_json(&sys.to_json()).unwrap(), sys);
    }

    #[test]
    fn evolution_preserves_state_invariants(seq in sequence(3, 30), rho in hermitian_traceless(3), eps in -0.3..0.3f64) {
        let model = ImperfectionModel::new(eps).unwrap();
        let out = apply(&seq, &rho, &model).unwrap();
        prop_assert!(out.matrix().is_hermitian(1e-12));
        prop_assert!(out.matrix().trace().norm() < 1e-12);
        let psi = apply(&seq, &StateVector::zero(3).unwrap(), &model).unwrap();
        prop_assert!((psi.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn readout_is_linear(
        sys in spin_system(3),
        r1 in hermitian_traceless(3),
        r2 in hermitian_traceless(3),
        alpha in -2.0..2.0f64,
        beta in -2.0..2.0f64,
        k in 1usize..=3,
        expand in any::<bool>(),
    ) {
        let mix = r1.combine(alpha, &r2, beta).unwrap();
        let l1 = readout_spectrum(&r1, k, &sys, expand).unwrap();
        let l2 = readout_spectrum(&r2, k, &sys, expand).unwrap();
        let lm = readout_spectrum(&mix, k, &sys, expand).unwrap();
        for ((a, b), m) in l1.iter().zip(&l2).zip(&lm) {
            prop_assert!((a.amplitude * alpha + b.amplitude * beta - m.amplitude).norm() < 1e-12);
            prop_assert_eq!(a.frequency_hz, m.frequency_hz);
        }
    }

    #[test]
    fn readout_line_counts(sys in (2usize..=5).prop_flat_map(spin_system), k_frac in 0.0..1.0f64) {
        let n = sys.len();
        let k = 1 + ((k_frac * n as f64) as usize).min(n - 1);
        let zero = DeviationDensityMatrix::new(Matrix::zeros(1 << n)).unwrap();
        let g = (1..=n).filter(|&l| l != k && sys.spin(l).multiplicity == 3).count();
        prop_assert_eq!(readout_spectrum(&zero, k, &sys, false).unwrap().len(), 1 << (n - 1));
        prop_assert_eq!(readout_spectrum(&zero, k, &sys, true).unwrap().len(), (1 << (n - 1 - g)) * 4usize.pow(g as u32));
    }
}
