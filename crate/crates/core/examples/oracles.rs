//! Exact reference energies for the two built-in problems.
//!
//! `cargo run --example oracles`

use vite_ddqn::hamiltonian::{e_bound, h2_hamiltonian, maxcut_hamiltonian, min_basis_state, Graph};
use vite_ddqn::qsim::exact_ground_energy;

fn main() -> anyhow::Result<()> {
    let graph = Graph::default_instance();
    let mc = maxcut_hamiltonian(&graph)?;
    let (e0, _) = exact_ground_energy(&mc)?;
    let (e_basis, idx) = min_basis_state(&mc);
    println!(
        "Max-Cut on {} vertices, edges {:?}",
        graph.n_vertices(),
        graph.edges()
    );
    println!("  {} Pauli terms", mc.terms().len());
    println!("  ground energy  {e0:.10}");
    println!("  best cut state |{idx:04b}> energy {e_basis:.10}");
    println!("  operator bound {:.10}", e_bound(&mc));

    let h2 = h2_hamiltonian()?;
    let (fci, _) = exact_ground_energy(&h2)?;
    let (hf, hf_idx) = min_basis_state(&h2);
    println!("H2 (STO-3G, 0.735 Å, Bravyi-Kitaev)");
    println!("  E_FCI   {fci:.6}");
    println!("  E_HF    {hf:.6} at |{hf_idx:04b}>");
    println!("  E_bound {:.6}", e_bound(&h2));
    Ok(())
}
