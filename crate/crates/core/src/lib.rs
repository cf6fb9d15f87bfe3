//! Variational quantum circuit training with adaptive per-parameter pruning.
//!
//! The crate is layered bottom-up:
//!
//! * [`simulator`]: dense statevector simulation, Pauli observables, shot sampling.
//! * [`circuits`]: the parameterized circuit IR and the ansatz builders.
//! * [`gradients`]: parameter-shift gradients plus a central-difference oracle.
//! * [`optimizers`]: GD, RMSProp and Adam with freeze masks.
//! * [`prune`]: the adaptive pruning state machine (thresholds, windowed
//!   gradient-difference accumulation, saliency, freezing).
//! * [`harness`]: losses, datasets, Hamiltonian files, exact diagonalization
//!   and the experiment runner that ties everything together.
//!
//! Bit ordering is fixed crate-wide: qubit 0 is the most significant bit of a
//! basis-state index, so `|1100⟩` on four qubits is index 12.

pub mod circuits;
pub mod error;
pub mod gradients;
pub mod harness;
pub mod optimizers;
pub mod prune;
pub mod seed;
pub mod simulator;

pub use error::{Error, Result};
