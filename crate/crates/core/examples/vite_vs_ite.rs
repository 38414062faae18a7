//! VITE against exact imaginary time evolution on a random two-qubit
//! Hamiltonian. The gap shrinks linearly with δτ (forward Euler).
//!
//! `cargo run --release --example vite_vs_ite -- [seed]`

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vite_ddqn::qsim::{
    exact_ground_energy, exact_ite, expectation, Circuit, GateKind, PauliHamiltonian, PauliString,
};
use vite_ddqn::vite::{run_vite_from, ViteConfig};

fn ansatz() -> anyhow::Result<Circuit> {
    let mut c = Circuit::new(2);
    for _ in 0..4 {
        for q in 0..2 {
            c.push(GateKind::Ry, q)?;
            c.push(GateKind::Rz, q)?;
        }
        c.push(GateKind::Cnot, 0)?;
    }
    for q in 0..2 {
        c.push(GateKind::Ry, q)?;
        c.push(GateKind::Rz, q)?;
    }
    Ok(c)
}

fn main() -> anyhow::Result<()> {
    let seed = std::env::args()
        .nth(1)
        .map(|s| s.parse())
        .transpose()?
        .unwrap_or(1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut terms = Vec::new();
    for s in [
        "IX", "IY", "IZ", "XI", "XX", "XY", "XZ", "YI", "YX", "YY", "YZ", "ZI", "ZX", "ZY", "ZZ",
    ] {
        terms.push((rng.gen_range(-1.0..1.0), s.parse::<PauliString>()?));
    }
    let l1: f64 = terms.iter().map(|t| f64::abs(t.0)).sum();
    let ham = PauliHamiltonian::new(2, terms.into_iter().map(|(c, p)| (c / l1, p)))?;
    let (e0, _) = exact_ground_energy(&ham)?;

    let circ = ansatz()?;
    let init: Vec<f64> = (0..circ.n_params())
        .map(|_| rng.gen_range(-PI..PI))
        .collect();
    let start = circ.prepare(&init)?;
    println!("ground energy {e0:.8}");
    println!("{:>8} {:>12} {:>12}", "δτ", "max gap", "E(τ=2)");
    for delta_tau in [0.05, 0.02, 0.01, 0.005] {
        let config = ViteConfig {
            delta_tau,
            max_steps: (2.0 / delta_tau).round() as usize,
            energy_tol: 1e-12,
            ..ViteConfig::default()
        };
        let r = run_vite_from(&circ, &ham, &config, init.clone())?;
        let mut worst = 0.0f64;
        for (e, &tau) in r.energy_trace.iter().zip(&r.tau_trace) {
            let exact = expectation(&exact_ite(&ham, &start, tau)?, &ham)?;
            worst = worst.max((e - exact).abs());
        }
        println!("{delta_tau:>8} {worst:>12.3e} {:>12.8}", r.final_energy());
    }
    Ok(())
}
