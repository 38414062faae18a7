use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vite_ddqn::hamiltonian::{
    basis_prep_gates, e_bound, h2_molecule, maxcut_hamiltonian, min_basis_state, Graph,
};
use vite_ddqn::qsim::{
    apply_gate, exact_ground_energy, expectation, PauliHamiltonian, PauliString, StateVector,
};

fn random_hamiltonian(rng: &mut impl Rng) -> PauliHamiltonian {
    let n = rng.gen_range(1..5);
    let mut h = PauliHamiltonian::zero(n);
    for _ in 0..rng.gen_range(1..10) {
        let s: String = (0..n)
            .map(|_| ['I', 'X', 'Y', 'Z'][rng.gen_range(0..4)])
            .collect();
        h.add_term(rng.gen_range(-2.0..2.0), s.parse::<PauliString>().unwrap())
            .unwrap();
    }
    h
}

#[test]
fn e_bound_never_exceeds_ground_energy() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..100 {
        let h = random_hamiltonian(&mut rng);
        let (e0, _) = exact_ground_energy(&h).unwrap();
        assert!(
            e_bound(&h) <= e0 + 1e-12,
            "bound {} above ground {}",
            e_bound(&h),
            e0
        );
    }
}

fn random_graph() -> impl Strategy<Value = Graph> {
    (2usize..=6).prop_flat_map(|n| {
        let pairs: Vec<(usize, usize)> = (0..n)
            .flat_map(|u| (u + 1..n).map(move |v| (u, v)))
            .collect();
        let k = pairs.len();
        (
            Just(n),
            Just(pairs),
            prop::collection::vec(prop::option::of(0.1f64..3.0), k),
        )
            .prop_map(|(n, pairs, ws)| {
                let edges = pairs
                    .into_iter()
                    .zip(ws)
                    .filter_map(|((u, v), w)| w.map(|w| (u, v, w)))
                    .collect();
                Graph::new(n, edges).unwrap()
            })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maxcut_ground_energy_is_minus_state_energy_of_best_cut(g in random_graph()) {
        let h = maxcut_hamiltonian(&g).unwrap();
        let (e0, _) = exact_ground_energy(&h).unwrap();
        let n = g.n_vertices();
        let total: f64 = g.edges().iter().map(|e| e.2).sum();
        let best_cut = (0..1usize << n).map(|s| g.cut_value(s)).fold(0.0, f64::max);
        // Σ w Z_u Z_v = total − 2·cut
        prop_assert!((e0 - (total - 2.0 * best_cut)).abs() < 1e-9);
        for side in 0..1usize << n {
            let e = expectation(&StateVector::basis(n, side).unwrap(), &h).unwrap();
            prop_assert!((e - (total - 2.0 * g.cut_value(side))).abs() < 1e-12);
        }
    }

    #[test]
    fn basis_prep_reaches_index(n in 1usize..6, seed in any::<u64>()) {
        let index = (seed as usize) % (1 << n);
        let mut s = StateVector::zero(n);
        for gate in basis_prep_gates(n, index) {
            s = apply_gate(&s, &gate).unwrap();
        }
        prop_assert!(s.fidelity(&StateVector::basis(n, index).unwrap()) > 1.0 - 1e-12);
    }
}

#[test]
fn default_maxcut_reference_values() {
    let h = maxcut_hamiltonian(&Graph::default_instance()).unwrap();
    let (e0, _) = exact_ground_energy(&h).unwrap();
    assert!((e0 + 3.0).abs() < 1e-12);
    assert_eq!(e_bound(&h), -3.0);
    assert_eq!(min_basis_state(&h).0, -3.0);
}

#[test]
fn h2_reference_values() {
    let m = h2_molecule().unwrap();
    let (e0, _) = exact_ground_energy(&m.hamiltonian).unwrap();
    assert!((e0 + 1.137).abs() < 1e-3);
    assert!((e_bound(&m.hamiltonian) + 1.985).abs() < 5e-3);
    assert!((min_basis_state(&m.hamiltonian).0 + 1.116).abs() < 2e-3);
    assert!((m.reference.e_fci - e0).abs() < 1e-6);
}
