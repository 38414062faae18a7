use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::network::QNetwork;
use super::optim::{huber, Adam};
use super::policy::{epsilon, masked_argmax, select_action};
use super::replay::{ReplayBuffer, Transition};
use crate::env::{ActionMask, N_ACTIONS};
use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AgentConfig {
    /// Adam learning rate α.
    pub alpha: f64,
    /// Discount factor γ.
    pub gamma: f64,
    /// ε decay rate Γ.
    pub decay: f64,
    pub epsilon_floor: f64,
    pub batch: usize,
    pub replay_iters: usize,
    /// Target sync period in episodes.
    pub target_sync_every: usize,
    pub buffer_capacity: usize,
    pub hidden: Vec<usize>,
    pub seed: u64,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            alpha: 0.001,
            gamma: 0.99,
            decay: 0.985,
            epsilon_floor: 0.1,
            batch: 128,
            replay_iters: 64,
            target_sync_every: 30,
            buffer_capacity: 50_000,
            hidden: vec![32, 32, 32],
            seed: 0,
        }
    }
}

impl AgentConfig {
    /// Slow-decay exploration for long campaigns.
    pub fn extended() -> Self {
        Self {
            decay: 0.9993,
            epsilon_floor: 0.05,
            ..Self::default()
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.decay > 0.0 && self.decay < 1.0) {
            return Err(Error::Config(format!(
                "decay must lie in (0, 1), got {}",
                self.decay
            )));
        }
        if !(0.0..=1.0).contains(&self.epsilon_floor) {
            return Err(Error::Config(format!(
                "epsilon_floor must lie in [0, 1], got {}",
                self.epsilon_floor
            )));
        }
        if !(self.alpha > 0.0) || !(0.0..=1.0).contains(&self.gamma) {
            return Err(Error::Config(
                "alpha must be positive and gamma in [0, 1]".into(),
            ));
        }
        if self.batch == 0 || self.buffer_capacity == 0 || self.target_sync_every == 0 {
            return Err(Error::Config(
                "batch, buffer_capacity and target_sync_every must be positive".into(),
            ));
        }
        if self.hidden.contains(&0) {
            return Err(Error::Config("hidden layers must be non-empty".into()));
        }
        Ok(())
    }

    pub fn layer_sizes(&self, input: usize, output: usize) -> Vec<usize> {
        let mut s = vec![input];
        s.extend(&self.hidden);
        s.push(output);
        s
    }
}

/// r if `done`, else r + γ·Q_target(s′, argmax_{a legal} Q_online(s′, a)).
pub fn ddqn_target(
    reward: f64,
    next_state: &[f64],
    done: bool,
    next_mask: &ActionMask,
    online: &QNetwork,
    target: &QNetwork,
    gamma: f64,
) -> Result<f64> {
    if done {
        return Ok(reward);
    }
    let a = masked_argmax(&online.forward(next_state)?, next_mask)?;
    Ok(reward + gamma * target.forward(next_state)?[a])
}

/// One Adam step on the mean Huber loss of the batch. Returns the loss
/// before the update.
pub fn train_batch(
    online: &mut QNetwork,
    target: &QNetwork,
    batch: &[&Transition],
    adam: &mut Adam,
    gamma: f64,
) -> Result<f64> {
    if batch.is_empty() {
        return Err(Error::Empty("training batch".into()));
    }
    let (loss, grad) = batch_loss_and_grad(online, target, batch, gamma)?;
    if !loss.is_finite() || !grad.iter().all(|g| g.is_finite()) {
        return Err(Error::Numerical(format!("non-finite training loss {loss}")));
    }
    adam.step(online.params_mut(), &grad);
    if !online.is_finite() {
        return Err(Error::Numerical("network parameters diverged".into()));
    }
    Ok(loss)
}

/// Mean Huber loss and its gradient with respect to the online
/// parameters, with targets held fixed.
pub fn batch_loss_and_grad(
    online: &QNetwork,
    target: &QNetwork,
    batch: &[&Transition],
    gamma: f64,
) -> Result<(f64, Vec<f64>)> {
    let mut grad = vec![0.0; online.n_params()];
    let mut loss = 0.0;
    let scale = 1.0 / batch.len() as f64;
    for t in batch {
        let y = ddqn_target(
            t.reward,
            &t.next_state,
            t.done,
            &t.next_mask,
            online,
            target,
            gamma,
        )?;
        let cache = online.forward_cached(&t.state)?;
        let (l, dl) = huber(cache.output()[t.action], y);
        loss += l * scale;
        let mut d_out = vec![0.0; online.output_dim()];
        d_out[t.action] = dl * scale;
        online.backward(&cache, &d_out, &mut grad);
    }
    Ok((loss, grad))
}

pub fn sync_target(online: &QNetwork, target: &mut QNetwork) {
    target.copy_from(online);
}

/// Online/target networks, optimizer, replay memory and RNG, all
/// serializable for bit-exact resumption.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Agent {
    config: AgentConfig,
    online: QNetwork,
    target: QNetwork,
    adam: Adam,
    buffer: ReplayBuffer,
    rng: ChaCha8Rng,
    episodes_trained: usize,
}

impl Agent {
    pub fn new(config: AgentConfig, input_dim: usize) -> Result<Self> {
        config.validate()?;
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
        let online = QNetwork::he_uniform(&config.layer_sizes(input_dim, N_ACTIONS), &mut rng)?;
        let target = online.clone();
        let adam = Adam::new(online.n_params(), config.alpha);
        let buffer = ReplayBuffer::new(config.buffer_capacity);
        Ok(Self {
            config,
            online,
            target,
            adam,
            buffer,
            rng,
            episodes_trained: 0,
        })
    }

    pub fn config(&self) -> &AgentConfig {
        &self.config
    }

    pub fn online(&self) -> &QNetwork {
        &self.online
    }

    pub fn target(&self) -> &QNetwork {
        &self.target
    }

    pub fn buffer(&self) -> &ReplayBuffer {
        &self.buffer
    }

    pub fn episodes_trained(&self) -> usize {
        self.episodes_trained
    }

    pub fn epsilon(&self, episode: usize, step: usize) -> f64 {
        epsilon(episode, step, self.config.decay, self.config.epsilon_floor)
    }

    /// ε-greedy action for step `step` of episode `episode` (both from 1).
    pub fn act(
        &mut self,
        state: &[f64],
        mask: &ActionMask,
        episode: usize,
        step: usize,
    ) -> Result<usize> {
        let eps = self.epsilon(episode, step);
        select_action(&self.online, state, mask, eps, &mut self.rng)
    }

    pub fn greedy(&self, state: &[f64], mask: &ActionMask) -> Result<usize> {
        masked_argmax(&self.online.forward(state)?, mask)
    }

    pub fn remember(&mut self, t: Transition) {
        self.buffer.push(t);
    }

    /// Episode-end learning: `replay_iters` minibatch updates once the buffer
    /// holds a full batch, then a target sync every `target_sync_every`
    /// episodes. Returns the mean loss, `None` if no update ran.
    pub fn end_episode(&mut self) -> Result<Option<f64>> {
        self.episodes_trained += 1;
        let mut mean = None;
        if self.buffer.len() >= self.config.batch {
            let mut total = 0.0;
            for _ in 0..self.config.replay_iters {
                let idx = self.buffer.sample_indices(self.config.batch, &mut self.rng);
                let batch: Vec<&Transition> =
                    idx.iter().map(|&i| self.buffer.get(i).unwrap()).collect();
                total += train_batch(
                    &mut self.online,
                    &self.target,
                    &batch,
                    &mut self.adam,
                    self.config.gamma,
                )?;
            }
            mean = Some(total / self.config.replay_iters.max(1) as f64);
        }
        if self.episodes_trained % self.config.target_sync_every == 0 {
            sync_target(&self.online, &mut self.target);
        }
        Ok(mean)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn passthrough(n: usize) -> QNetwork {
        let mut p = vec![0.0; n * n + n];
        for i in 0..n {
            p[i * n + i] = 1.0;
        }
        QNetwork::from_params(&[n, n], p).unwrap()
    }

    #[test]
    fn terminal_target_is_reward() {
        let net = passthrough(5);
        assert_eq!(
            ddqn_target(5.6, &[9.0; 5], true, &[false; 5], &net, &net, 0.99).unwrap(),
            5.6
        );
    }

    #[test]
    fn online_selects_target_evaluates() {
        let online = passthrough(5);
        // target doubles its input
        let mut target = passthrough(5);
        for p in target.params_mut().iter_mut() {
            *p *= 2.0;
        }
        let s = [0.0, 0.1, 0.5, 0.2, 0.3];
        let y = ddqn_target(0.0, &s, false, &[true; 5], &online, &target, 0.99).unwrap();
        assert!((y - 0.99).abs() < 1e-15);
        let y = ddqn_target(
            0.0,
            &s,
            false,
            &[true, true, false, true, true],
            &online,
            &target,
            0.99,
        )
        .unwrap();
        assert!((y - 0.99 * 0.6).abs() < 1e-15);
        assert!(ddqn_target(0.0, &s, false, &[false; 5], &online, &target, 0.99).is_err());
    }

    #[test]
    fn fixed_point_batch_leaves_params() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let mut online = QNetwork::he_uniform(&[4, 3, 5], &mut rng).unwrap();
        let s = vec![0.1, 0.2, 0.3, 0.4];
        let q = online.forward(&s).unwrap();
        let t = Transition {
            state: s.clone(),
            action: 2,
            reward: q[2],
            next_state: s,
            done: true,
            next_mask: [true; 5],
        };
        let before = online.clone();
        let mut adam = Adam::new(online.n_params(), 0.001);
        let target = online.clone();
        let loss = train_batch(&mut online, &target, &[&t, &t, &t], &mut adam, 0.99).unwrap();
        assert_eq!(loss, 0.0);
        assert_eq!(online, before);
    }

    #[test]
    fn repeated_training_converges_to_target() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut online = QNetwork::he_uniform(&[4, 8, 5], &mut rng).unwrap();
        let t = Transition {
            state: vec![0.5, -0.2, 0.1, 0.9],
            action: 3,
            reward: 1.7,
            next_state: vec![0.0; 4],
            done: true,
            next_mask: [true; 5],
        };
        let target = online.clone();
        let mut adam = Adam::new(online.n_params(), 0.01);
        for _ in 0..2000 {
            train_batch(&mut online, &target, &[&t], &mut adam, 0.99).unwrap();
        }
        assert!((online.forward(&t.state).unwrap()[3] - 1.7).abs() < 1e-3);
    }

    #[test]
    fn sync_makes_networks_agree() {
        let mut r1 = ChaCha8Rng::seed_from_u64(1);
        let mut r2 = ChaCha8Rng::seed_from_u64(2);
        let online = QNetwork::he_uniform(&[40, 32, 5], &mut r1).unwrap();
        let mut target = QNetwork::he_uniform(&[40, 32, 5], &mut r2).unwrap();
        let mut rs = ChaCha8Rng::seed_from_u64(3);
        let states: Vec<Vec<f64>> = (0..100)
            .map(|_| (0..40).map(|_| rs.gen_range(0..7) as f64 / 6.0).collect())
            .collect();
        assert!(states
            .iter()
            .any(|s| online.forward(s).unwrap() != target.forward(s).unwrap()));
        sync_target(&online, &mut target);
        sync_target(&online, &mut target);
        for s in &states {
            assert_eq!(online.forward(s).unwrap(), target.forward(s).unwrap());
        }
    }

    #[test]
    fn config_validation() {
        assert!(AgentConfig::default().validate().is_ok());
        assert!(AgentConfig {
            decay: 1.0,
            ..AgentConfig::default()
        }
        .validate()
        .is_err());
        assert!(AgentConfig {
            epsilon_floor: 1.5,
            ..AgentConfig::default()
        }
        .validate()
        .is_err());
        assert_eq!(AgentConfig::extended().decay, 0.9993);
    }
}
