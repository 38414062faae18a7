use serde::Serialize;

use super::config::{Problem, RunConfig};
use crate::env::{ThresholdController, ThresholdVariant};
use crate::error::Result;
use crate::hamiltonian::{
    e_bound, h2_molecule, load_molecule, maxcut_hamiltonian, min_basis_state, Graph,
};
use crate::qsim::{exact_ground_energy, PauliHamiltonian};

/// A Hamiltonian together with its reference energies.
#[derive(Clone, Debug, Serialize)]
pub struct ProblemInstance {
    pub problem: Problem,
    #[serde(skip)]
    pub hamiltonian: PauliHamiltonian,
    /// Exact ground energy from the dense oracle.
    pub e_min: f64,
    /// Hartree-Fock energy for molecules, the lowest basis-state energy otherwise.
    pub e_hf: f64,
    pub e_fci: Option<f64>,
    pub e_bound: f64,
}

impl ProblemInstance {
    pub fn maxcut(graph: &Graph) -> Result<Self> {
        let hamiltonian = maxcut_hamiltonian(graph)?;
        Self::from_hamiltonian(Problem::Maxcut, hamiltonian, None, None)
    }

    pub fn h2() -> Result<Self> {
        let mol = h2_molecule()?;
        Self::from_hamiltonian(
            Problem::H2,
            mol.hamiltonian,
            Some(mol.reference.e_hf),
            Some(mol.reference.e_fci),
        )
    }

    pub fn from_config(config: &RunConfig) -> Result<Self> {
        match config.problem {
            Problem::Maxcut => match &config.graph {
                Some(p) => Self::maxcut(&Graph::load(p)?),
                None => Self::maxcut(&Graph::default_instance()),
            },
            Problem::H2 => match &config.molecule {
                Some(p) => {
                    let mol = load_molecule(p)?;
                    Self::from_hamiltonian(
                        Problem::H2,
                        mol.hamiltonian,
                        Some(mol.reference.e_hf),
                        Some(mol.reference.e_fci),
                    )
                }
                None => Self::h2(),
            },
        }
    }

    pub fn build(problem: Problem) -> Result<Self> {
        match problem {
            Problem::Maxcut => Self::maxcut(&Graph::default_instance()),
            Problem::H2 => Self::h2(),
        }
    }

    fn from_hamiltonian(
        problem: Problem,
        hamiltonian: PauliHamiltonian,
        e_hf: Option<f64>,
        e_fci: Option<f64>,
    ) -> Result<Self> {
        let (e_min, _) = exact_ground_energy(&hamiltonian)?;
        let e_hf = e_hf.unwrap_or_else(|| min_basis_state(&hamiltonian).0);
        let e_bound = e_bound(&hamiltonian);
        Ok(Self {
            problem,
            hamiltonian,
            e_min,
            e_hf,
            e_fci,
            e_bound,
        })
    }

    pub fn controller(&self, variant: ThresholdVariant) -> ThresholdController {
        match variant {
            ThresholdVariant::Evolving => ThresholdController::evolving(self.e_min),
            ThresholdVariant::Adaptive => ThresholdController::adaptive(self.e_hf, self.e_bound),
        }
    }
}
