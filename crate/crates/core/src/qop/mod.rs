//! Dense matrix kernel and the parity/Walsh algebra shared by every other module.

pub mod matrix;
pub mod parity;
pub mod walsh;

pub use matrix::{global_phase_fidelity, kron_chain, pauli, Gate2, Matrix, C64, MAX_QUBITS};
pub use parity::{
    parity_phase_unitary, parity_sign, DiagonalSignOperator, ParityPhaseGate, ParityTerm, Support,
};
pub use walsh::{walsh_reconstruct, walsh_spectrum, walsh_transform};
