use std::cell::Cell;
use std::f64::consts::FRAC_PI_2;
use std::fmt;

use serde::Serialize;

use super::spectrum::{
    readout_spectrum_with, PhaseClass, Readout, SpectrumLine, IDEAL_PHASE_TOL, IMPERFECT_PHASE_TOL,
};
use super::state::{
    apply, thermal_state, DeviationDensityMatrix, ImperfectionModel, QuantumState, StateVector,
};
use crate::compiler::{compile_diagonal, rf_matrix, Axis, GateAction, PulseSequence};
use crate::error::{Error, Result};
use crate::oracle::{
    classify, function_of, phase_oracle, table1_operator_in, BooleanFunction, FunctionClass,
    Table1Id,
};
use crate::qop::DiagonalSignOperator;
use crate::spin_system::{topology_of, SpinSystem};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Constant,
    Balanced,
    /// Imperfect pulses left mixed-phase lines and no emissive one.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Constant => "constant",
            Verdict::Balanced => "balanced",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl Verdict {
    /// The verdict a correct run should reach for `class`.
    pub fn expected_for(class: FunctionClass) -> Option<Verdict> {
        match class {
            FunctionClass::Constant => Some(Verdict::Constant),
            FunctionClass::Balanced => Some(Verdict::Balanced),
            FunctionClass::Neither => None,
        }
    }
}

/// Counts applications of a phase oracle.
struct CountingOracle<T> {
    inner: T,
    calls: Cell<usize>,
}

impl<T> CountingOracle<T> {
    fn new(inner: T) -> Self {
        CountingOracle {
            inner,
            calls: Cell::new(0),
        }
    }

    fn call(&self) -> &T {
        self.calls.set(self.calls.get() + 1);
        &self.inner
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct PureRunReport {
    /// Most probable output basis state, qubit 1 first.
    pub outcome: String,
    pub probability: f64,
    pub verdict: Verdict,
    pub oracle_calls: usize,
}

/// Pure-state algorithm: `|0..0>`, `Ry(pi/2)` on every qubit, one oracle call,
/// `Ry(-pi/2)` on every qubit, then read the most probable basis state.
pub fn pure_dj_run(f: &BooleanFunction) -> Result<PureRunReport> {
    if classify(f) == FunctionClass::Neither {
        return Err(Error::NeitherClass);
    }
    let n = f.num_inputs();
    let oracle = CountingOracle::new(phase_oracle(f));
    let mut psi = StateVector::zero(n)?;
    for q in 1..=n {
        psi.apply_action(&GateAction::OneQubit {
            qubit: q,
            gate: rf_matrix(Axis::Y, FRAC_PI_2),
        });
    }
    psi.apply_action(&GateAction::Diagonal(oracle.call().phases()));
    for q in 1..=n {
        psi.apply_action(&GateAction::OneQubit {
            qubit: q,
            gate: rf_matrix(Axis::Y, -FRAC_PI_2),
        });
    }

    let probs = psi.probabilities();
    let (best, &probability) = probs
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1).then(b.0.cmp(&a.0)))
        .expect("nonempty register");
    let verdict = if best == 0 && (probability - 1.0).abs() < 1e-9 {
        Verdict::Constant
    } else {
        Verdict::Balanced
    };
    Ok(PureRunReport {
        outcome: (0..n)
            .map(|i| {
                if best >> (n - 1 - i) & 1 == 1 {
                    '1'
                } else {
                    '0'
                }
            })
            .collect(),
        probability,
        verdict,
        oracle_calls: oracle.calls.get(),
    })
}

/// Oracle handed to [`dj_nmr_run`].
#[derive(Clone, Debug, PartialEq)]
pub enum NmrOracle {
    Diagonal(DiagonalSignOperator),
    /// A reference oracle (f1..f9) laid out over the system's spin labels.
    Table1(Table1Id),
}

impl From<DiagonalSignOperator> for NmrOracle {
    fn from(d: DiagonalSignOperator) -> Self {
        NmrOracle::Diagonal(d)
    }
}

impl From<Table1Id> for NmrOracle {
    fn from(id: Table1Id) -> Self {
        NmrOracle::Table1(id)
    }
}

impl NmrOracle {
    pub fn operator(&self, system: &SpinSystem) -> Result<DiagonalSignOperator> {
        match self {
            NmrOracle::Diagonal(d) => Ok(d.clone()),
            NmrOracle::Table1(id) => table1_operator_in(*id, &system.labels()),
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct NmrRunOptions {
    pub model: ImperfectionModel,
    /// Overrides the default tolerance (`1e-6` ideal, `0.2` with imperfections).
    pub phase_tol: Option<f64>,
    pub methyl_expand: bool,
}

impl NmrRunOptions {
    pub fn phase_tol(&self) -> f64 {
        self.phase_tol.unwrap_or(if self.model.is_ideal() {
            IDEAL_PHASE_TOL
        } else {
            IMPERFECT_PHASE_TOL
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct NmrRunReport {
    pub verdict: Verdict,
    pub oracle_calls: usize,
    /// Lines of every spin, in chain order.
    pub spectra: Vec<Vec<SpectrumLine>>,
    /// The compiled oracle that was applied.
    pub sequence: PulseSequence,
}

/// Serialized run summary.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunSummary<'a> {
    pub verdict: Verdict,
    pub oracle_calls: usize,
    pub emissive_lines: Vec<&'a SpectrumLine>,
}

impl NmrRunReport {
    pub fn lines(&self) -> impl Iterator<Item = &SpectrumLine> {
        self.spectra.iter().flatten()
    }

    pub fn emissive_lines(&self) -> Vec<&SpectrumLine> {
        self.lines()
            .filter(|l| l.phase_class == PhaseClass::Emissive)
            .collect()
    }

    /// Labels of spins with at least one emissive line.
    pub fn emissive_spins(&self) -> Vec<&str> {
        self.spectra
            .iter()
            .filter(|lines| lines.iter().any(|l| l.phase_class == PhaseClass::Emissive))
            .map(|lines| lines[0].spin.as_str())
            .collect()
    }

    pub fn summary(&self) -> RunSummary<'_> {
        RunSummary {
            verdict: self.verdict,
            oracle_calls: self.oracle_calls,
            emissive_lines: self.emissive_lines(),
        }
    }
}

/// NMR algorithm on the thermal state: `(pi/2)_y` on every spin, one application of
/// the compiled oracle, then per spin the final `(pi/2)_{-y}` followed by the
/// `(pi/2)_y` readout pulse. Lines are classified by phase.
pub fn dj_nmr_run(
    oracle: impl Into<NmrOracle>,
    system: &SpinSystem,
    options: &NmrRunOptions,
) -> Result<NmrRunReport> {
    let op = oracle.into().operator(system)?;
    if op.num_qubits() != system.len() {
        return Err(Error::DimensionMismatch {
            left: op.num_qubits(),
            right: system.len(),
        });
    }
    if classify(&function_of(&op)) == FunctionClass::Neither {
        return Err(Error::NeitherClass);
    }
    let sequence = compile_diagonal(&op, &topology_of(system))?;
    nmr_run_with(&sequence, system, options)
}

/// Runs the NMR protocol with an already compiled oracle.
pub fn nmr_run_with(
    sequence: &PulseSequence,
    system: &SpinSystem,
    options: &NmrRunOptions,
) -> Result<NmrRunReport> {
    let n = system.len();
    let scale = options.model.rf_scale();
    let oracle = CountingOracle::new(sequence);

    let mut rho = thermal_state(system);
    for q in 1..=n {
        rho.apply_action(&GateAction::OneQubit {
            qubit: q,
            gate: rf_matrix(Axis::Y, FRAC_PI_2 * scale),
        });
    }
    let rho = apply(*oracle.call(), &rho, &options.model)?;

    let readout = Readout {
        methyl_expand: options.methyl_expand,
        model: options.model,
        phase_tol: options.phase_tol(),
    };
    let spectra = (1..=n)
        .map(|k| spin_readout(&rho, k, system, &readout))
        .collect::<Result<Vec<_>>>()?;

    let lines = || spectra.iter().flatten();
    let verdict = if lines().any(|l| l.phase_class == PhaseClass::Emissive) {
        Verdict::Balanced
    } else if let Some(l) = lines().find(|l| l.phase_class == PhaseClass::Mixed) {
        if options.model.is_ideal() {
            return Err(Error::MixedUnderIdealPulses {
                spin: l.spin.clone(),
            });
        }
        Verdict::Inconclusive
    } else {
        Verdict::Constant
    };
    Ok(NmrRunReport {
        verdict,
        oracle_calls: oracle.calls.get(),
        spectra,
        sequence: sequence.clone(),
    })
}

fn spin_readout(
    rho: &DeviationDensityMatrix,
    k: usize,
    system: &SpinSystem,
    readout: &Readout,
) -> Result<Vec<SpectrumLine>> {
    let mut rho = rho.clone();
    let h_inv = rf_matrix(Axis::Y, -FRAC_PI_2 * readout.model.rf_scale());
    rho.apply_action(&GateAction::OneQubit {
        qubit: k,
        gate: h_inv,
    });
    readout_spectrum_with(&rho, k, system, readout)
}
