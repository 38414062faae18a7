use serde::Serialize;

use super::config::Problem;
use super::problem::ProblemInstance;
use crate::env::su2_grid;
use crate::error::Result;
use crate::vite::{run_vite, ViteConfig};

/// VITE on the hardware-efficient SU(2) ansatz.
#[derive(Clone, Debug, Serialize)]
pub struct BaselineReport {
    pub problem: Problem,
    pub reps: usize,
    pub gate_count: usize,
    pub depth: usize,
    pub columns: usize,
    pub final_energy: f64,
    pub e_min: f64,
    /// final_energy − e_min.
    pub gap: f64,
    pub converged: bool,
    pub energy_trace: Vec<f64>,
    pub final_params: Vec<f64>,
}

pub fn evaluate_baseline(problem: Problem, reps: usize) -> Result<BaselineReport> {
    evaluate_baseline_with(
        &ProblemInstance::build(problem)?,
        reps,
        &ViteConfig::default(),
    )
}

pub fn evaluate_baseline_with(
    instance: &ProblemInstance,
    reps: usize,
    vite: &ViteConfig,
) -> Result<BaselineReport> {
    let grid = su2_grid(reps)?;
    let result = run_vite(&grid.to_circuit(), &instance.hamiltonian, vite)?;
    let final_energy = result.final_energy();
    Ok(BaselineReport {
        problem: instance.problem,
        reps,
        gate_count: grid.gate_count(),
        depth: grid.depth(),
        columns: grid.columns(),
        final_energy,
        e_min: instance.e_min,
        gap: final_energy - instance.e_min,
        converged: result.converged,
        energy_trace: result.energy_trace,
        final_params: result.final_params,
    })
}
