//! Dense statevector simulation for few-qubit circuits.

mod circuit;
mod gate;
mod state;

pub use circuit::{apply_circuit, Circuit};
pub use gate::{gate_unitary, GateKind, GateOp, Matrix};
pub use state::{apply_gate, expectation_z, init_zero_state, ComplexAmp, StateVector, MAX_QUBITS, MIN_QUBITS};
