use std::fs;
use std::path::Path;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vite_ddqn::ddqn::AgentConfig;
use vite_ddqn::env::{
    run_circuit, Action, CircuitGrid, CircuitJson, Status, D_MAX, G_MAX, N_ACTIONS, ROWS,
};
use vite_ddqn::harness::{
    circuit_path, extract_skeleton, load_corpus, read_records, run_training_in, trial_dir, Problem,
    ProblemInstance, RunConfig, TrialCheckpoint, CHECKPOINT_FILE, EPISODES_CSV, SUMMARY_FILE,
};
use vite_ddqn::qsim::{expectation, Circuit, GateKind};
use vite_ddqn::vite::ViteConfig;

/// Max-Cut run small enough for the suite, with a batch that starts
/// training after a handful of episodes.
fn small_config(episodes: usize, trials: usize) -> RunConfig {
    RunConfig {
        episodes,
        trials,
        seed: 11,
        checkpoint_every: 5,
        agent: AgentConfig {
            batch: 16,
            replay_iters: 4,
            target_sync_every: 4,
            ..AgentConfig::default()
        },
        ..RunConfig::maxcut()
    }
}

#[test]
fn identical_configs_give_identical_logs() {
    let (a, b, c) = (
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
        tempfile::tempdir().unwrap(),
    );
    let config = small_config(12, 2);
    run_training_in(&config, a.path(), false).unwrap();
    run_training_in(&config, b.path(), false).unwrap();
    let log_a = fs::read(a.path().join(EPISODES_CSV)).unwrap();
    assert_eq!(log_a, fs::read(b.path().join(EPISODES_CSV)).unwrap());
    assert_eq!(
        read_records(&a.path().join(EPISODES_CSV)).unwrap().len(),
        24
    );

    // trials are independent, so the parallel schedule logs the same
    let parallel = RunConfig {
        parallel: true,
        ..config
    };
    run_training_in(&parallel, c.path(), false).unwrap();
    assert_eq!(log_a, fs::read(c.path().join(EPISODES_CSV)).unwrap());
}

#[test]
fn resumed_run_matches_uninterrupted_run() {
    let (full, split) = (tempfile::tempdir().unwrap(), tempfile::tempdir().unwrap());
    let config = small_config(20, 1);
    run_training_in(&config, full.path(), false).unwrap();

    run_training_in(
        &RunConfig {
            episodes: 10,
            ..config.clone()
        },
        split.path(),
        false,
    )
    .unwrap();
    let ck: TrialCheckpoint = serde_json::from_str(
        &fs::read_to_string(trial_dir(split.path(), 0).join(CHECKPOINT_FILE)).unwrap(),
    )
    .unwrap();
    assert_eq!(ck.episodes_done, 10);
    assert!(ck.agent.episodes_trained() == 10 && !ck.agent.buffer().is_empty());
    run_training_in(&config, split.path(), true).unwrap();

    assert_eq!(
        fs::read(full.path().join(EPISODES_CSV)).unwrap(),
        fs::read(split.path().join(EPISODES_CSV)).unwrap()
    );
    let load = |d: &Path| -> TrialCheckpoint {
        serde_json::from_str(&fs::read_to_string(trial_dir(d, 0).join(CHECKPOINT_FILE)).unwrap())
            .unwrap()
    };
    let (x, y) = (load(full.path()), load(split.path()));
    assert_eq!(x.agent, y.agent);
    assert_eq!(x.controller, y.controller);
}

#[test]
fn resume_rejects_a_different_configuration() {
    let dir = tempfile::tempdir().unwrap();
    run_training_in(&small_config(5, 1), dir.path(), false).unwrap();
    let other = RunConfig {
        seed: 12,
        ..small_config(8, 1)
    };
    assert!(run_training_in(&other, dir.path(), true).is_err());
}

#[test]
fn logged_outcomes_agree_with_saved_circuits() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_training_in(&small_config(30, 1), dir.path(), false).unwrap();
    let ham = ProblemInstance::build(Problem::Maxcut).unwrap().hamiltonian;
    let mut successes = 0;
    for r in &out.records {
        match r.outcome {
            Status::Success => {
                successes += 1;
                assert!(r.final_energy < r.e_threshold);
                let text =
                    fs::read_to_string(circuit_path(dir.path(), r.trial, r.episode)).unwrap();
                let json: CircuitJson = serde_json::from_str(&text).unwrap();
                let grid = json.grid().unwrap();
                assert!(grid.violations().is_empty());
                assert_eq!((grid.gate_count(), grid.depth()), (r.gate_count, r.depth));
                assert!(r.gate_count <= G_MAX && r.depth <= D_MAX);
                let e = expectation(&run_circuit(&grid, &json.params).unwrap(), &ham).unwrap();
                assert!((e - r.final_energy).abs() < 1e-9);
                assert_eq!(json.energy, Some(r.final_energy));
            }
            Status::Failure => {
                // a failing placement overshoots a bound by at most one gate or layer
                assert!(r.gate_count <= G_MAX + 1 && r.depth <= D_MAX + 1);
                assert!(!circuit_path(dir.path(), r.trial, r.episode).exists());
            }
            Status::Running => panic!("episode {} logged while running", r.episode),
        }
        assert!(r.e_best <= r.final_energy || r.outcome == Status::Failure);
    }
    assert!(successes > 0);
    assert_eq!(load_corpus(dir.path()).unwrap().len(), successes);
}

#[test]
fn h2_adaptive_threshold_starts_above_hartree_fock() {
    let dir = tempfile::tempdir().unwrap();
    let config = RunConfig {
        episodes: 2,
        seed: 3,
        ..RunConfig::h2()
    };
    let out = run_training_in(&config, dir.path(), false).unwrap();
    let inst = ProblemInstance::build(Problem::H2).unwrap();
    assert!((out.records[0].e_threshold - (inst.e_hf + 0.005)).abs() < 1e-12);
    assert!((out.summary.e_hf + 1.116).abs() < 2e-3);
    let summary: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(dir.path().join(SUMMARY_FILE)).unwrap()).unwrap();
    assert_eq!(summary["config"]["problem"], "h2");
}

#[test]
fn zero_episodes_writes_a_header_only_log() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_training_in(&small_config(0, 1), dir.path(), false).unwrap();
    assert!(out.records.is_empty());
    let text = fs::read_to_string(dir.path().join(EPISODES_CSV)).unwrap();
    assert_eq!(text.lines().count(), 1);
    assert!(text.starts_with("trial,episode,"));
}

fn gate_sequences(c: &Circuit) -> Vec<Vec<(GateKind, usize)>> {
    (0..ROWS)
        .map(|q| {
            c.ops_on(q)
                .filter(|(_, o)| o.kind != GateKind::I)
                .map(|(_, o)| (o.kind, o.qubit))
                .collect()
        })
        .collect()
}

/// A fixed gate prefix followed by a random masked decoration.
fn decorated(motif: &[Action], rng: &mut impl Rng) -> CircuitGrid {
    let mut g = CircuitGrid::new();
    for a in motif {
        g.place_mut(*a).unwrap();
    }
    let extra = rng.gen_range(4..16);
    for _ in 0..extra {
        if g.is_full() {
            break;
        }
        let mask = g.valid_actions();
        let legal: Vec<usize> = (0..N_ACTIONS).filter(|&a| mask[a]).collect();
        g.place_mut(Action::from_index(legal[rng.gen_range(0..legal.len())]).unwrap())
            .unwrap();
    }
    g
}

fn motif_strategy() -> impl Strategy<Value = Vec<Action>> {
    prop::collection::vec(0usize..N_ACTIONS, 2..9).prop_map(|picks| {
        // replay the picks through the mask so the motif itself is legal
        let mut g = CircuitGrid::new();
        let mut out = Vec::new();
        for p in picks {
            let mask = g.valid_actions();
            let a = if mask[p] {
                Action::from_index(p).unwrap()
            } else {
                Action::I
            };
            g.place_mut(a).unwrap();
            out.push(a);
        }
        if g.gate_count() == 0 {
            out.push(Action::Ry);
        }
        out
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn planted_motif_is_recovered(motif in motif_strategy(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut reference = CircuitGrid::new();
        for a in &motif {
            reference.place_mut(*a).unwrap();
        }
        // tags only feed the reaches-best flag
        let corpus: Vec<CircuitJson> = (0..30)
            .map(|_| {
                let g = decorated(&motif, &mut rng);
                CircuitJson::new(&g, &vec![0.0; g.n_params()]).with_energy(0.0)
            })
            .collect();
        let ham = ProblemInstance::build(Problem::Maxcut).unwrap().hamiltonian;
        let vite = ViteConfig { max_steps: 50, ..ViteConfig::default() };
        let out = extract_skeleton(&corpus, 0.9, &ham, &vite).unwrap();
        prop_assert!(!out.is_empty());
        let top = &out[0];
        prop_assert_eq!(gate_sequences(&top.grid.to_circuit()), gate_sequences(&reference.to_circuit()));
        for c in &out {
            prop_assert!(c.grid.violations().is_empty());
            prop_assert!(c.gate_count <= top.gate_count);
            let e = expectation(&run_circuit(&c.grid, &c.circuit.params).unwrap(), &ham).unwrap();
            prop_assert!((e - c.energy).abs() < 1e-10);
        }
    }
}
