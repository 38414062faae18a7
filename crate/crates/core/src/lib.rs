//! Reinforcement-learned ansatz design for variational imaginary time
//! evolution (VITE).
//!
//! The crate is organized bottom-up:
//!
//! - [`qsim`]: dense statevector simulation, derivative states and the
//!   brute-force oracles (diagonalization, exact imaginary-time evolution).
//! - [`hamiltonian`]: Max-Cut and H₂ benchmark Hamiltonians.
//! - [`vite`]: the McLachlan linear system and its Euler integration.
//! - [`env`]: the circuit-construction environment (grid, masks, rewards,
//!   thresholds).
//! - [`ddqn`]: a from-scratch Double Deep-Q Network agent.
//! - [`harness`]: training runs, baselines, skeleton extraction and plots.
//!
//! Runnable walkthroughs of every capability live in `examples/`.

pub mod ddqn;
pub mod env;
pub mod error;
pub mod hamiltonian;
pub mod harness;
pub mod qsim;
pub mod vite;

pub use error::{Error, Result};
