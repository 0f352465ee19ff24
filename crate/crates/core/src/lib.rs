//! Phase-oracle construction, nearest-neighbour J-coupling pulse compilation
//! and NMR simulation of the n-qubit modified Deutsch-Jozsa algorithm.

pub mod compiler;
pub mod error;
pub mod oracle;
pub mod qop;
pub mod simulator;
pub mod spin_system;

pub use error::{Error, Result};
