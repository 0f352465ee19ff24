//! Compilation of phase oracles onto the NMR native gate set: selective RF
//! rotations plus `exp(-i pi/4 Z_k Z_l)` J-coupling gates between chain
//! neighbours. Non-neighbouring supports are gathered with SWAPs.

mod gate;
mod sequence;
mod simplify;
mod stats;
mod synth;
mod topology;

pub use gate::{normalize_rf_angle, rf_matrix, Axis, GateAction, NativeGate};
pub use sequence::{ExpansionCounts, PulseSequence};
pub use simplify::simplify;
pub use stats::{sequence_stats, SequenceStats};
pub use synth::{
    compile_cnot, compile_diagonal, compile_factorization, compile_parity_phase, compile_swap,
    routing_swaps,
};
pub use topology::{zz_duration, zz_effective_angle, CouplingTopology};
