use nmrdj::compiler::{compile_diagonal, compile_parity_phase, sequence_stats, CouplingTopology};
use nmrdj::oracle::{
    classify, phase_oracle, table1_operator, BooleanFunction, FunctionClass, Table1Id,
};
use nmrdj::qop::{global_phase_fidelity, pauli, Matrix, ParityPhaseGate, Support, C64};
use nmrdj::simulator::{dj_nmr_run, pure_dj_run, NmrRunOptions, PhaseClass, Verdict};
use nmrdj::spin_system::{topology_of, SpinSystem};
use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

fn chain(n: usize) -> SpinSystem {
    let doc = serde_json::json!({
        "spins": (1..=n).map(|i| serde_json::json!({
            "label": format!("Q{i}"), "species": "1H", "shift_hz": 40.0 * i as f64, "gamma": 1.0
        })).collect::<Vec<_>>(),
        "j_hz": (0..n).map(|k| (0..n).map(|l| if k.abs_diff(l) == 1 { 8.0 } else { 0.0 }).collect::<Vec<_>>()).collect::<Vec<_>>(),
    });
    SpinSystem::from_json(&doc.to_string()).unwrap()
}

fn random_balanced(n: usize, rng: &mut StdRng) -> BooleanFunction {
    let mut table: Vec<bool> = (0..1usize << n).map(|x| x % 2 == 1).collect();
    table.shuffle(rng);
    BooleanFunction::new(n, table).unwrap()
}

fn check_agreement(f: &BooleanFunction, system: &SpinSystem) {
    let expected = Verdict::expected_for(classify(f)).unwrap();
    let pure = pure_dj_run(f).unwrap();
    let nmr = dj_nmr_run(phase_oracle(f), system, &NmrRunOptions::default()).unwrap();
    assert_eq!(pure.verdict, expected, "{:?}", f.table());
    assert_eq!(nmr.verdict, expected, "{:?}", f.table());
    assert_eq!((pure.oracle_calls, nmr.oracle_calls), (1, 1));
}

#[test]
fn verdicts_agree_on_every_two_bit_function() {
    let system = chain(2);
    let mut seen = 0;
    for bits in 0u8..16 {
        let f = BooleanFunction::from_fn(2, |x| bits >> x & 1 == 1).unwrap();
        if classify(&f) == FunctionClass::Neither {
            continue;
        }
        check_agreement(&f, &system);
        seen += 1;
    }
    assert_eq!(seen, 8);
}

#[test]
fn verdicts_agree_on_random_seven_bit_functions() {
    let system = chain(7);
    let mut rng = StdRng::seed_from_u64(7);
    for _ in 0..50 {
        check_agreement(&random_balanced(7, &mut rng), &system);
    }
}

#[test]
fn f2_emission_sits_on_its_two_spins() {
    let sys = SpinSystem::crotonic_acid();
    let r = dj_nmr_run(Table1Id::F2, &sys, &NmrRunOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Balanced);
    assert_eq!(r.emissive_spins(), vec!["C2", "C3"]);
}

#[test]
fn f1_reference_spectra_are_absorptive() {
    let sys = SpinSystem::crotonic_acid();
    let r = dj_nmr_run(Table1Id::F1, &sys, &NmrRunOptions::default()).unwrap();
    assert_eq!(r.verdict, Verdict::Constant);
    assert_eq!(r.spectra.len(), 7);
    assert!(r.lines().all(|l| l.phase_class == PhaseClass::Absorptive));
}

#[test]
fn table1_runs_match_their_class() {
    let sys = SpinSystem::crotonic_acid();
    for id in Table1Id::ALL {
        let r = dj_nmr_run(id, &sys, &NmrRunOptions::default()).unwrap();
        assert_eq!(
            Some(r.verdict),
            Verdict::expected_for(id.expected_class()),
            "{id}"
        );
        assert_eq!(r.oracle_calls, 1);
        let stats = sequence_stats(&r.sequence, &sys).unwrap();
        assert_eq!(stats.zz_gates, r.sequence.zz_count());
    }
}

#[test]
fn emission_pattern_is_gamma_scale_invariant() {
    let sys = SpinSystem::crotonic_acid();
    let mut doc: serde_json::Value = serde_json::from_str(&sys.to_json()).unwrap();
    for spin in doc["spins"].as_array_mut().unwrap() {
        let g = spin["gamma"].as_f64().unwrap();
        spin["gamma"] = (g * 3.7).into();
    }
    let scaled = SpinSystem::from_json(&doc.to_string()).unwrap();
    for id in [Table1Id::F2, Table1Id::F5, Table1Id::F9] {
        let a = dj_nmr_run(id, &sys, &NmrRunOptions::default()).unwrap();
        let b = dj_nmr_run(id, &scaled, &NmrRunOptions::default()).unwrap();
        let classes = |r: &nmrdj::simulator::NmrRunReport| {
            r.lines().map(|l| l.phase_class).collect::<Vec<_>>()
        };
        assert_eq!(classes(&a), classes(&b), "{id}");
        for (x, y) in a.lines().zip(b.lines()) {
            assert!((x.amplitude * 3.7 - y.amplitude).norm() < 1e-9);
        }
    }
}

/// `exp(A)` by scaling and squaring a truncated Taylor series.
fn expm(a: &Matrix) -> Matrix {
    let norm: f64 = a.as_array().iter().map(|z| z.norm()).sum();
    let squarings = norm.log2().ceil().max(0.0) as i32 + 1;
    let a = a.scale(C64::new(0.5f64.powi(squarings), 0.0));
    let mut sum = Matrix::identity(a.dim());
    let mut term = Matrix::identity(a.dim());
    for k in 1..30 {
        term = term
            .matmul(&a)
            .unwrap()
            .scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term).unwrap();
    }
    for _ in 0..squarings {
        sum = sum.matmul(&sum).unwrap();
    }
    sum
}

#[test]
fn seventh_order_factor_against_matrix_exponential() {
    let theta = std::f64::consts::FRAC_PI_4;
    let z_all = nmrdj::qop::kron_chain(&vec![pauli::z(); 7]).unwrap();
    let target = expm(&z_all.scale(C64::new(0.0, theta)));
    let gate = ParityPhaseGate::new(Support::range(1, 7), theta).unwrap();
    let seq = compile_parity_phase(&gate, &CouplingTopology::path(7)).unwrap();
    let u = seq.unitary().unwrap();
    assert!(u.max_abs_diff(&target).unwrap() < 1e-10);
    assert!(global_phase_fidelity(&u, &target).unwrap() > 1.0 - 1e-12);
}

#[test]
fn table1_sequences_respect_the_chain() {
    let sys = SpinSystem::crotonic_acid();
    let topo = topology_of(&sys);
    for id in Table1Id::ALL {
        let d = table1_operator(id).unwrap();
        let seq = compile_diagonal(&d, &topo).unwrap();
        seq.check_topology(&topo).unwrap();
        let f = global_phase_fidelity(&seq.unitary().unwrap(), &d.to_matrix()).unwrap();
        assert!(f >= 1.0 - 1e-10, "{id}: {f}");
    }
}
