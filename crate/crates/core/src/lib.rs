//! Quantum-circuit algorithms for the interacting Kitaev chain, run on a
//! dense statevector simulator with an exact-diagonalization oracle:
//!
//! * parity-conserved variational ground-state search ([`vqe`])
//! * many-body winding number from time-evolved Majorana Green functions ([`topo`])
//! * Majorana-zero-mode visualization via inter-parity transfer amplitudes ([`mzm`])

pub mod ed;
pub mod error;
pub mod evolve;
pub mod formats;
pub mod linalg;
pub mod model;
pub mod mzm;
pub mod sim;
pub mod topo;
pub mod vqe;

pub use error::{Error, Result};
