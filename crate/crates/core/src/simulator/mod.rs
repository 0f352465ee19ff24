//! Pure-state and thermal-ensemble simulation of the Deutsch-Jozsa protocol,
//! with per-spin multiplet readout.

mod run;
mod spectrum;
mod state;

pub use run::{
    dj_nmr_run, nmr_run_with, pure_dj_run, NmrOracle, NmrRunOptions, NmrRunReport, PureRunReport,
    RunSummary, Verdict,
};
pub use spectrum::{
    readout_spectrum, readout_spectrum_with, PhaseClass, Readout, SpectrumLine, IDEAL_PHASE_TOL,
    IMPERFECT_PHASE_TOL,
};
pub use state::{
    apply, thermal_state, DeviationDensityMatrix, Evolution, ImperfectionModel, QuantumState,
    StateVector, STATE_TOLERANCE,
};
