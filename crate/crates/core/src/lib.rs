//! Numerical workbench for qubit teleportation through noisy entangled
//! resources.
//!
//! The library models an EPR pair (or a three-qubit W state) whose qubits
//! decohere under Pauli noise while they are shared between the two parties,
//! and asks what the damaged resource is still good for:
//!
//! * [`channels`] produces the decohered resource states, both from exact
//!   closed forms and by integrating the underlying master equation;
//! * [`teleport`] runs the standard teleportation circuit through such a
//!   resource and averages the output fidelity over all input states;
//! * [`entanglement`] computes concurrence, entanglement of formation, the
//!   Groverian measure and a positive-partial-transpose witness for the
//!   resource;
//! * [`decomp`] builds explicit pure-state ensembles for the resource:
//!   decompositions whose members all carry the minimal concurrence, and
//!   product-state ensembles in the regime where the resource is separable;
//! * [`qstate`] holds the shared state/matrix plumbing.
//!
//! Everything is deterministic: fixed quadrature rules, fixed-step
//! integration, seeded restarts for the one iterative optimizer.

pub mod channels;
pub mod decomp;
pub mod entanglement;
mod error;
pub mod qstate;
pub mod teleport;

pub use error::{Error, Result};
