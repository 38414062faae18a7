//! Dense statevector simulation for few-qubit circuits.

mod circuit;
mod gate;
mod oracle;
mod pauli;
mod state;

pub use circuit::{Circuit, Op};
pub use gate::{apply_gate, apply_gate_in_place, rotation_matrix, Gate, GateKind, Pauli};
pub use oracle::{
    exact_ground_energy, exact_ite, exact_ite_with, spectrum, Spectrum, MAX_ORACLE_QUBITS,
};
pub use pauli::{expectation, PauliHamiltonian, PauliString};
pub use state::{inner, inner_re, StateVector, C64};
