//! VITE on the hardware-efficient SU(2) ansatz, the reference the designed
//! circuits are compared against.
//!
//! `cargo run --release --example baselines`

use vite_ddqn::harness::{evaluate_baseline, Problem};

fn main() -> anyhow::Result<()> {
    for problem in [Problem::Maxcut, Problem::H2] {
        for reps in [1, 2] {
            let r = evaluate_baseline(problem, reps)?;
            println!(
                "{:<6} p={reps} g={} D={} columns={} E={:.8} gap={:.2e} steps={} converged={}",
                problem.as_str(),
                r.gate_count,
                r.depth,
                r.columns,
                r.final_energy,
                r.gap,
                r.energy_trace.len() - 1,
                r.converged
            );
        }
    }
    Ok(())
}
