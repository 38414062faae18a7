use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use vite_ddqn::ddqn::{
    batch_loss_and_grad, ddqn_target, epsilon, huber, sync_target, Adam, Agent, AgentConfig,
    QNetwork, Transition,
};
use vite_ddqn::env::ActionMask;

fn random_mask(rng: &mut impl Rng) -> ActionMask {
    let mut m = [false; 5];
    for x in m.iter_mut() {
        *x = rng.gen_bool(0.6);
    }
    m[rng.gen_range(0..5)] = true;
    m
}

fn random_transition(input: usize, rng: &mut impl Rng) -> Transition {
    Transition {
        state: (0..input).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        action: rng.gen_range(0..5),
        reward: rng.gen_range(-3.0..3.0),
        next_state: (0..input).map(|_| rng.gen_range(-1.0..1.0)).collect(),
        done: rng.gen_bool(0.3),
        next_mask: random_mask(rng),
    }
}

/// Mean Huber loss with the targets frozen at `ys`.
fn frozen_loss(net: &QNetwork, batch: &[Transition], ys: &[f64]) -> f64 {
    batch
        .iter()
        .zip(ys)
        .map(|(t, &y)| huber(net.forward(&t.state).unwrap()[t.action], y).0)
        .sum::<f64>()
        / batch.len() as f64
}

/// He-uniform weights shifted by small random offsets. With the zero biases
/// of a fresh network a dead layer puts the next pre-activations exactly on
/// the ReLU kink, where central differences are meaningless.
fn generic_net(sizes: &[usize], rng: &mut impl Rng) -> QNetwork {
    let mut net = QNetwork::he_uniform(sizes, rng).unwrap();
    for p in net.params_mut() {
        *p += rng.gen_range(-0.1..0.1);
    }
    net
}

#[test]
fn backprop_matches_central_differences_on_fifty_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    let shapes: [&[usize]; 5] = [
        &[4, 3, 5],
        &[4, 8, 8, 5],
        &[6, 5, 4, 3, 5],
        &[40, 32, 32, 32, 5],
        &[3, 5],
    ];
    let h = 1e-5;
    let mut worst = 0.0f64;
    for k in 0..50 {
        let sizes = shapes[k % shapes.len()];
        let online = generic_net(sizes, &mut rng);
        let target = generic_net(sizes, &mut rng);
        let batch: Vec<Transition> = (0..rng.gen_range(1..9))
            .map(|_| random_transition(sizes[0], &mut rng))
            .collect();
        let refs: Vec<&Transition> = batch.iter().collect();
        let (_, grad) = batch_loss_and_grad(&online, &target, &refs, 0.99).unwrap();
        let ys: Vec<f64> = batch
            .iter()
            .map(|t| {
                ddqn_target(
                    t.reward,
                    &t.next_state,
                    t.done,
                    &t.next_mask,
                    &online,
                    &target,
                    0.99,
                )
                .unwrap()
            })
            .collect();
        // every parameter of the small nets, a random subset of the large one
        let idx: Vec<usize> = if online.n_params() > 500 {
            (0..300)
                .map(|_| rng.gen_range(0..online.n_params()))
                .collect()
        } else {
            (0..online.n_params()).collect()
        };
        for i in idx {
            let mut p = online.params().to_vec();
            p[i] += h;
            let lp = frozen_loss(
                &QNetwork::from_params(sizes, p.clone()).unwrap(),
                &batch,
                &ys,
            );
            p[i] -= 2.0 * h;
            let lm = frozen_loss(&QNetwork::from_params(sizes, p).unwrap(), &batch, &ys);
            let fd = (lp - lm) / (2.0 * h);
            // components below 1e-4 are compared on that absolute scale, which
            // sits well above the ~1e-11 rounding floor of the difference quotient
            let rel = (grad[i] - fd).abs() / grad[i].abs().max(fd.abs()).max(1e-4);
            worst = worst.max(rel);
        }
    }
    assert!(worst < 1e-5, "worst relative error {worst}");
}

#[test]
fn adam_scalar_quadratic_trajectory() {
    // f(x) = (x − 3)², x₀ = 0, lr = 0.1; reference values from the textbook
    // update evaluated independently in double precision
    let expected = [
        0.09999999983333335,
        0.19989729258521102,
        0.29961847654925267,
        0.3990864689442145,
        0.4982205437727129,
    ];
    let mut adam = Adam::new(1, 0.1);
    assert_eq!((adam.beta1, adam.beta2, adam.eps), (0.9, 0.999, 1e-8));
    let mut x = [0.0];
    for e in expected {
        let g = [2.0 * (x[0] - 3.0)];
        adam.step(&mut x, &g);
        assert!((x[0] - e).abs() < 1e-15, "{} vs {e}", x[0]);
    }
    // first step magnitude is lr regardless of gradient scale
    let mut adam = Adam::new(1, 0.1);
    let mut y = [5.0];
    adam.step(&mut y, &[1e4]);
    assert!((y[0] - 4.9).abs() < 1e-9);
}

fn play(agent: &mut Agent, episodes: usize, seed: u64) -> Vec<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut actions = Vec::new();
    for ep in 1..=episodes {
        let mut state: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..1.0)).collect();
        for step in 1..=12 {
            let mask = random_mask(&mut rng);
            let a = agent.act(&state, &mask, ep, step).unwrap();
            assert!(mask[a]);
            actions.push(a);
            let next: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..1.0)).collect();
            agent.remember(Transition {
                state: state.clone(),
                action: a,
                reward: rng.gen_range(-1.0..1.0),
                next_state: next.clone(),
                done: step == 12,
                next_mask: random_mask(&mut rng),
            });
            state = next;
        }
        agent.end_episode().unwrap();
    }
    actions
}

#[test]
fn identical_seeds_give_bit_identical_training() {
    let config = AgentConfig {
        batch: 16,
        replay_iters: 4,
        target_sync_every: 3,
        seed: 7,
        ..AgentConfig::default()
    };
    let mut a = Agent::new(config.clone(), 40).unwrap();
    let mut b = Agent::new(config.clone(), 40).unwrap();
    assert_eq!(play(&mut a, 8, 1), play(&mut b, 8, 1));
    assert_eq!(a, b);
    assert!(a
        .online()
        .params()
        .iter()
        .zip(b.online().params())
        .all(|(x, y)| x.to_bits() == y.to_bits()));

    let mut c = Agent::new(AgentConfig { seed: 8, ..config }, 40).unwrap();
    play(&mut c, 8, 1);
    assert_ne!(a.online().params(), c.online().params());
}

#[test]
fn target_sync_semantics() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let sizes = [40, 32, 32, 32, 5];
    let online = QNetwork::he_uniform(&sizes, &mut rng).unwrap();
    let mut target = QNetwork::he_uniform(&sizes, &mut rng).unwrap();
    let states: Vec<Vec<f64>> = (0..100)
        .map(|_| (0..40).map(|_| rng.gen_range(0.0..1.0)).collect())
        .collect();
    let gap = |t: &QNetwork| {
        states
            .iter()
            .flat_map(|s| {
                let (a, b) = (online.forward(s).unwrap(), t.forward(s).unwrap());
                a.into_iter()
                    .zip(b)
                    .map(|(x, y)| (x - y).abs())
                    .collect::<Vec<_>>()
            })
            .fold(0.0, f64::max)
    };
    assert!(gap(&target) > 0.0);
    sync_target(&online, &mut target);
    assert_eq!(gap(&target), 0.0);
    let once = target.clone();
    sync_target(&online, &mut target);
    assert_eq!(target, once);
}

proptest! {
    #[test]
    fn epsilon_never_increases_along_the_schedule(
        decay in 0.5f64..0.9999, floor in 0.0f64..1.0, pairs in prop::collection::vec((1usize..200, 1usize..40), 1..80),
    ) {
        let mut pairs = pairs;
        pairs.sort_by_key(|&(nu, t)| (nu - 1) + (t - 1));
        let mut prev = f64::INFINITY;
        for (nu, t) in pairs {
            let e = epsilon(nu, t, decay, floor);
            prop_assert!(e <= prev);
            prop_assert!(e >= floor && e <= 1.0);
            prop_assert!((e - decay.powi((nu + t - 2) as i32).max(floor)).abs() < 1e-12);
            prev = e;
        }
    }

    #[test]
    fn forward_is_pure(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = QNetwork::he_uniform(&[40, 32, 32, 32, 5], &mut rng).unwrap();
        let s: Vec<f64> = (0..40).map(|_| rng.gen_range(0.0..1.0)).collect();
        let a = net.forward(&s).unwrap();
        prop_assert_eq!(a.len(), 5);
        prop_assert_eq!(a, net.forward(&s).unwrap());
    }
}

#[test]
fn epsilon_worked_values() {
    assert_eq!(epsilon(1, 1, 0.985, 0.1), 1.0);
    assert!((epsilon(3, 2, 0.985, 0.1) - 0.985f64.powi(3)).abs() < 1e-15);
    assert!((epsilon(3, 2, 0.985, 0.1) - 0.95567).abs() < 1e-5);
    assert_eq!(epsilon(10_000, 1, 0.985, 0.1), 0.1);
}
