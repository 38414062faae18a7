//! Fixtures shared by the integration suites.
#![allow(dead_code)]

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vite_ddqn::qsim::{exact_ite, expectation, Circuit, GateKind, PauliHamiltonian, PauliString};
use vite_ddqn::vite::{run_vite_from, ViteConfig};

/// H layer, four blocks of (Ry, Rz on both qubits, CNOT), then a closing
/// Ry, Rz layer: 18 angles for a 6-dimensional state manifold.
pub fn universal_two_qubit() -> Circuit {
    let mut c = Circuit::new(2);
    for _ in 0..4 {
        for q in 0..2 {
            c.push(GateKind::Ry, q).unwrap();
            c.push(GateKind::Rz, q).unwrap();
        }
        c.push(GateKind::Cnot, 0).unwrap();
    }
    for q in 0..2 {
        c.push(GateKind::Ry, q).unwrap();
        c.push(GateKind::Rz, q).unwrap();
    }
    c
}

/// Coefficients U(−1, 1) on the 15 non-identity 2-qubit strings, scaled by
/// `l1 / Σ|λ|` so that the operator-space bound is −`l1`.
pub fn random_two_qubit_hamiltonian(rng: &mut impl Rng, l1: f64) -> PauliHamiltonian {
    let mut terms = Vec::new();
    for a in ['I', 'X', 'Y', 'Z'] {
        for b in ['I', 'X', 'Y', 'Z'] {
            if a == 'I' && b == 'I' {
                continue;
            }
            let p: PauliString = format!("{a}{b}").parse().unwrap();
            terms.push((rng.gen_range(-1.0..1.0), p));
        }
    }
    let sum: f64 = terms.iter().map(|t| f64::abs(t.0)).sum();
    PauliHamiltonian::new(2, terms.into_iter().map(|(c, p)| (c * l1 / sum, p))).unwrap()
}

/// Largest |E_vite(τ_k) − E_ite(τ_k)| over 20 random Hamiltonians, each
/// evolved to τ = 2 from angles U(−π, π).
pub fn worst_ite_deviation(delta_tau: f64, l1: f64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    let circ = universal_two_qubit();
    let config = ViteConfig {
        delta_tau,
        max_steps: (2.0 / delta_tau).round() as usize,
        energy_tol: 1e-12,
        ..ViteConfig::default()
    };
    let mut worst = 0.0f64;
    for _ in 0..20 {
        let ham = random_two_qubit_hamiltonian(&mut rng, l1);
        let init: Vec<f64> = (0..circ.n_params())
            .map(|_| rng.gen_range(-PI..PI))
            .collect();
        let start = circ.prepare(&init).unwrap();
        let r = run_vite_from(&circ, &ham, &config, init).unwrap();
        for (e, &tau) in r.energy_trace.iter().zip(&r.tau_trace) {
            let exact = expectation(&exact_ite(&ham, &start, tau).unwrap(), &ham).unwrap();
            worst = worst.max((e - exact).abs());
        }
    }
    worst
}
