use std::fs;
use std::path::{Path, PathBuf};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::config::RunConfig;
use super::problem::ProblemInstance;
use super::records::{write_records, EpisodeRecord, EPISODES_CSV};
use crate::ddqn::{Agent, AgentConfig, Transition};
use crate::env::{
    step_seed, Action, CircuitJson, EnvConfig, Environment, Status, ThresholdController, ROWS,
};
use crate::error::{Error, Result};

pub const CHECKPOINT_FILE: &str = "checkpoint.json";
pub const SUMMARY_FILE: &str = "summary.json";
pub const CHECKPOINT_VERSION: u32 = 1;

/// Everything needed to continue a trial bit-exactly.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct TrialCheckpoint {
    pub version: u32,
    pub trial: usize,
    pub episodes_done: usize,
    /// Fingerprint of the run configuration the checkpoint belongs to.
    pub config: RunConfig,
    pub agent: Agent,
    pub controller: ThresholdController,
    pub records: Vec<EpisodeRecord>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CircuitSummary {
    pub episode: usize,
    pub energy: f64,
    pub gate_count: usize,
    pub depth: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct TrialSummary {
    pub trial: usize,
    pub episodes: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub min_energy: Option<f64>,
    /// Lowest-energy successful circuit, fewest gates on ties.
    pub best_success: Option<CircuitSummary>,
    /// Successful circuit with the fewest gates, lowest energy on ties.
    pub most_compact_success: Option<CircuitSummary>,
    pub final_threshold: f64,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct RunSummary {
    pub config: RunConfig,
    pub e_min: f64,
    pub e_hf: f64,
    pub e_fci: Option<f64>,
    pub e_bound: f64,
    pub episodes: usize,
    pub successes: usize,
    pub success_rate: f64,
    pub min_energy: Option<f64>,
    pub trials: Vec<TrialSummary>,
}

/// Output of [`run_training`].
#[derive(Clone, Debug)]
pub struct RunOutput {
    pub dir: PathBuf,
    pub summary: RunSummary,
    pub records: Vec<EpisodeRecord>,
}

pub fn trial_dir(run_dir: &Path, trial: usize) -> PathBuf {
    run_dir.join(format!("trial_{trial:03}"))
}

pub fn circuit_path(run_dir: &Path, trial: usize, episode: usize) -> PathBuf {
    trial_dir(run_dir, trial)
        .join("circuits")
        .join(format!("episode_{episode:05}.json"))
}

/// Trial-specific agent and VITE seeds derived from the run seed.
fn trial_seeds(seed: u64, trial: usize) -> (u64, u64) {
    (
        step_seed(seed, trial as u64, 0xA6E7),
        step_seed(seed, trial as u64, 0x717E),
    )
}

/// Trains every trial and writes `episodes.csv`, `summary.json`, per-trial
/// checkpoints and one JSON per successful circuit under `config.output_dir`.
pub fn run_training(config: &RunConfig) -> Result<RunOutput> {
    run_training_in(config, &config.output_dir, false)
}

/// Like [`run_training`] but continues trials from their checkpoints.
pub fn resume_training(config: &RunConfig) -> Result<RunOutput> {
    run_training_in(config, &config.output_dir, true)
}

pub fn run_training_in(config: &RunConfig, dir: &Path, resume: bool) -> Result<RunOutput> {
    config.validate()?;
    let instance = ProblemInstance::from_config(config)?;
    fs::create_dir_all(dir)?;
    let run_one = |trial| run_trial(config, &instance, dir, trial, resume);
    let trials: Vec<(TrialSummary, Vec<EpisodeRecord>)> = if config.parallel {
        (0..config.trials)
            .into_par_iter()
            .map(run_one)
            .collect::<Result<_>>()?
    } else {
        (0..config.trials).map(run_one).collect::<Result<_>>()?
    };

    let records: Vec<EpisodeRecord> = trials.iter().flat_map(|(_, r)| r.iter().cloned()).collect();
    write_records(&dir.join(EPISODES_CSV), &records)?;
    let successes = records.iter().filter(|r| r.is_success()).count();
    let summary = RunSummary {
        config: config.clone(),
        e_min: instance.e_min,
        e_hf: instance.e_hf,
        e_fci: instance.e_fci,
        e_bound: instance.e_bound,
        episodes: records.len(),
        successes,
        success_rate: rate(successes, records.len()),
        min_energy: records
            .iter()
            .map(|r| r.final_energy)
            .min_by(f64::total_cmp),
        trials: trials.into_iter().map(|(s, _)| s).collect(),
    };
    write_json(&dir.join(SUMMARY_FILE), &summary)?;
    Ok(RunOutput {
        dir: dir.to_path_buf(),
        summary,
        records,
    })
}

fn rate(k: usize, n: usize) -> f64 {
    if n == 0 {
        0.0
    } else {
        k as f64 / n as f64
    }
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let tmp = path.with_extension("json.tmp");
    fs::write(&tmp, serde_json::to_vec_pretty(value)?)?;
    fs::rename(&tmp, path)?;
    Ok(())
}

fn load_checkpoint(
    path: &Path,
    config: &RunConfig,
    trial: usize,
) -> Result<Option<TrialCheckpoint>> {
    if !path.exists() {
        return Ok(None);
    }
    let text = fs::read_to_string(path)?;
    let ck: TrialCheckpoint = serde_json::from_str(&text).map_err(|e| Error::Data {
        path: path.to_path_buf(),
        reason: e.to_string(),
    })?;
    if ck.version != CHECKPOINT_VERSION || ck.trial != trial {
        return Err(Error::Data {
            path: path.to_path_buf(),
            reason: "checkpoint version or trial mismatch".into(),
        });
    }
    let mut expected = config.clone();
    expected.episodes = ck.config.episodes;
    expected.parallel = ck.config.parallel;
    if ck.config != expected {
        return Err(Error::Config(format!(
            "checkpoint {} was written by a different configuration",
            path.display()
        )));
    }
    Ok(Some(ck))
}

/// Runs one trial, returning its summary and records.
pub fn run_trial(
    config: &RunConfig,
    instance: &ProblemInstance,
    run_dir: &Path,
    trial: usize,
    resume: bool,
) -> Result<(TrialSummary, Vec<EpisodeRecord>)> {
    let dir = trial_dir(run_dir, trial);
    fs::create_dir_all(dir.join("circuits"))?;
    let ck_path = dir.join(CHECKPOINT_FILE);
    let (agent_seed, vite_seed) = trial_seeds(config.seed, trial);

    let env_config = EnvConfig {
        reward: config.reward,
        vite: config.vite.with_seed(vite_seed),
        ..EnvConfig::default()
    };
    let mut env = Environment::new(instance.hamiltonian.clone(), env_config)?;

    let checkpoint = if resume {
        load_checkpoint(&ck_path, config, trial)?
    } else {
        None
    };
    let (mut agent, mut ctrl, mut records, start) = match checkpoint {
        Some(ck) => (ck.agent, ck.controller, ck.records, ck.episodes_done),
        None => {
            let agent_cfg = AgentConfig {
                seed: agent_seed,
                ..config.agent.clone()
            };
            (
                Agent::new(agent_cfg, ROWS * env.grid().columns())?,
                instance.controller(config.threshold),
                Vec::new(),
                0,
            )
        }
    };

    let save =
        |agent: &Agent, ctrl: &ThresholdController, records: &[EpisodeRecord], done: usize| {
            let ck = TrialCheckpoint {
                version: CHECKPOINT_VERSION,
                trial,
                episodes_done: done,
                config: config.clone(),
                agent: agent.clone(),
                controller: ctrl.clone(),
                records: records.to_vec(),
            };
            write_json(&ck_path, &ck)
        };

    for episode in start + 1..=config.episodes {
        let record = match run_episode(&mut env, &mut agent, &mut ctrl, run_dir, trial, episode) {
            Ok(r) => r,
            Err(e) => {
                log::error!("trial {trial} aborted at episode {episode}: {e}");
                return Err(e);
            }
        };
        log::debug!(
            "trial {trial} episode {episode}: {} E={:.6} g={} D={} thr={:.4}",
            record.outcome.as_str(),
            record.final_energy,
            record.gate_count,
            record.depth,
            record.e_threshold
        );
        records.push(record);
        if config.checkpoint_every > 0 && episode % config.checkpoint_every == 0 {
            save(&agent, &ctrl, &records, episode)?;
        }
    }
    save(&agent, &ctrl, &records, config.episodes.max(start))?;
    write_records(&dir.join(EPISODES_CSV), &records)?;
    Ok((summarize_trial(trial, &records, ctrl.threshold()), records))
}

fn run_episode(
    env: &mut Environment,
    agent: &mut Agent,
    ctrl: &mut ThresholdController,
    run_dir: &Path,
    trial: usize,
    episode: usize,
) -> Result<EpisodeRecord> {
    env.reset(episode as u64);
    let threshold = ctrl.threshold();
    let mut cumulative = 0.0;
    let mut step = 0;
    let outcome = loop {
        step += 1;
        let state = env.state();
        let mask = env.valid_actions();
        let action = agent.act(&state, &mask, episode, step)?;
        let result = env.step(Action::from_index(action)?, ctrl)?;
        if !result.reward.is_finite() {
            return Err(Error::Numerical(format!(
                "non-finite reward at episode {episode} step {step}"
            )));
        }
        cumulative += result.reward;
        let done = result.outcome.status.is_terminal();
        agent.remember(Transition {
            state,
            action,
            reward: result.reward,
            next_state: env.state(),
            done,
            next_mask: result.next_mask,
        });
        if done {
            break result.outcome;
        }
    };
    let success = outcome.status == Status::Success;
    if success {
        let json = CircuitJson {
            trial: Some(trial),
            episode: Some(episode),
            ..CircuitJson::new(env.grid(), env.params()).with_energy(outcome.final_energy)
        };
        write_json(&circuit_path(run_dir, trial, episode), &json)?;
    }
    let epsilon_at_end = agent.epsilon(episode, outcome.steps);
    ctrl.end_episode(success);
    agent.end_episode()?;
    Ok(EpisodeRecord {
        trial,
        episode,
        final_energy: outcome.final_energy,
        gate_count: outcome.gate_count,
        depth: outcome.depth,
        cumulative_reward: cumulative,
        steps: outcome.steps,
        outcome: outcome.status,
        e_threshold: threshold,
        e_best: ctrl.best(),
        epsilon_at_end,
    })
}

pub fn summarize_trial(
    trial: usize,
    records: &[EpisodeRecord],
    final_threshold: f64,
) -> TrialSummary {
    let summary_of = |r: &EpisodeRecord| CircuitSummary {
        episode: r.episode,
        energy: r.final_energy,
        gate_count: r.gate_count,
        depth: r.depth,
    };
    let succ: Vec<&EpisodeRecord> = records.iter().filter(|r| r.is_success()).collect();
    let best_success = succ
        .iter()
        .min_by(|a, b| {
            a.final_energy
                .total_cmp(&b.final_energy)
                .then(a.gate_count.cmp(&b.gate_count))
        })
        .map(|r| summary_of(r));
    let most_compact_success = succ
        .iter()
        .min_by(|a, b| {
            a.gate_count
                .cmp(&b.gate_count)
                .then(a.final_energy.total_cmp(&b.final_energy))
        })
        .map(|r| summary_of(r));
    TrialSummary {
        trial,
        episodes: records.len(),
        successes: succ.len(),
        success_rate: rate(succ.len(), records.len()),
        min_energy: records
            .iter()
            .map(|r| r.final_energy)
            .min_by(f64::total_cmp),
        best_success,
        most_compact_success,
        final_threshold,
    }
}
