use serde::{Deserialize, Serialize};

use super::grid::{Action, ActionMask, CircuitGrid, COLUMNS};
use super::reward::{reward_v1, reward_v2, RewardVariant, G_MAX};
use super::threshold::ThresholdController;
use crate::error::{Error, Result};
use crate::hamiltonian::e_bound;
use crate::qsim::{expectation, PauliHamiltonian, StateVector};
use crate::vite::{run_vite, run_vite_warm, ViteConfig, ViteResult};

/// Depth budget D_max.
pub const D_MAX: usize = 10;
/// Energies this close to the threshold count as equal to it, so rounding
/// noise on an unchanged state cannot register as a success.
pub const ENERGY_RESOLUTION: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EnvConfig {
    pub reward: RewardVariant,
    pub vite: ViteConfig,
    pub max_gates: usize,
    pub max_depth: usize,
    pub columns: usize,
}

impl Default for EnvConfig {
    fn default() -> Self {
        Self {
            reward: RewardVariant::V1,
            vite: ViteConfig::default(),
            max_gates: G_MAX,
            max_depth: D_MAX,
            columns: COLUMNS,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Running,
    Success,
    Failure,
}

impl Status {
    pub fn is_terminal(self) -> bool {
        self != Status::Running
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Status::Running => "running",
            Status::Success => "success",
            Status::Failure => "failure",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpisodeOutcome {
    pub status: Status,
    pub final_energy: f64,
    pub gate_count: usize,
    pub depth: usize,
    pub steps: usize,
}

/// Why a step ended the episode as a failure.
#[derive(Clone, Debug, PartialEq)]
pub enum FailureCause {
    GateBound,
    DepthBound,
    GridFull,
    Vite(String),
}

#[derive(Clone, Debug)]
pub struct StepResult {
    pub reward: f64,
    /// Energy after the step (the previous energy when VITE did not run).
    pub energy: f64,
    pub outcome: EpisodeOutcome,
    pub failure: Option<FailureCause>,
    /// Legal actions at the new cursor.
    pub next_mask: ActionMask,
    /// The normalized reward's denominator was clamped.
    pub reward_clamped: bool,
}

/// One circuit-construction episode at a time on a fixed Hamiltonian.
#[derive(Clone, Debug)]
pub struct Environment {
    ham: PauliHamiltonian,
    e_bound: f64,
    e_initial: f64,
    config: EnvConfig,
    grid: CircuitGrid,
    params: Vec<f64>,
    e_prev: f64,
    steps: usize,
    episode: u64,
    status: Status,
    last_vite: Option<ViteResult>,
}

impl Environment {
    pub fn new(ham: PauliHamiltonian, config: EnvConfig) -> Result<Self> {
        if ham.n_qubits() != super::grid::ROWS {
            return Err(Error::DimensionMismatch {
                expected: super::grid::ROWS,
                got: ham.n_qubits(),
            });
        }
        config.vite.validate()?;
        if config.columns == 0 {
            return Err(Error::Config("grid needs at least one column".into()));
        }
        let e_initial = expectation(&StateVector::plus(ham.n_qubits()), &ham)?;
        let e_bound = e_bound(&ham);
        let grid = CircuitGrid::with_columns(config.columns);
        Ok(Self {
            ham,
            e_bound,
            e_initial,
            config,
            grid,
            params: Vec::new(),
            e_prev: e_initial,
            steps: 0,
            episode: 0,
            status: Status::Running,
            last_vite: None,
        })
    }

    pub fn hamiltonian(&self) -> &PauliHamiltonian {
        &self.ham
    }

    pub fn config(&self) -> &EnvConfig {
        &self.config
    }

    pub fn e_bound(&self) -> f64 {
        self.e_bound
    }

    /// Energy of the Hadamard-layer state, E_prev of every first step.
    pub fn initial_energy(&self) -> f64 {
        self.e_initial
    }

    /// Empties the grid. `episode` feeds the per-step VITE seeds.
    pub fn reset(&mut self, episode: u64) -> &CircuitGrid {
        self.grid = CircuitGrid::with_columns(self.config.columns);
        self.params.clear();
        self.e_prev = self.e_initial;
        self.steps = 0;
        self.episode = episode;
        self.status = Status::Running;
        self.last_vite = None;
        &self.grid
    }

    pub fn grid(&self) -> &CircuitGrid {
        &self.grid
    }

    /// Converged angles of the current grid.
    pub fn params(&self) -> &[f64] {
        &self.params
    }

    pub fn energy(&self) -> f64 {
        self.e_prev
    }

    pub fn steps(&self) -> usize {
        self.steps
    }

    pub fn status(&self) -> Status {
        self.status
    }

    pub fn valid_actions(&self) -> ActionMask {
        if self.status.is_terminal() {
            [false; super::grid::N_ACTIONS]
        } else {
            self.grid.valid_actions()
        }
    }

    pub fn last_vite(&self) -> Option<&ViteResult> {
        self.last_vite.as_ref()
    }

    pub fn state(&self) -> Vec<f64> {
        self.grid.encode_state()
    }

    /// Places `action`, re-optimizes the angles with VITE and scores the step.
    pub fn step(&mut self, action: Action, ctrl: &mut ThresholdController) -> Result<StepResult> {
        if self.status.is_terminal() {
            return Err(Error::Config("episode already finished; call reset".into()));
        }
        let next = self.grid.place(action)?;
        self.steps += 1;
        let g = next.gate_count();
        let d = next.depth();
        let threshold = ctrl.threshold() - ENERGY_RESOLUTION;

        let mut failure = if g > self.config.max_gates {
            Some(FailureCause::GateBound)
        } else if d > self.config.max_depth {
            Some(FailureCause::DepthBound)
        } else {
            None
        };

        let mut energy = self.e_prev;
        if failure.is_none() {
            match self.optimize(&next) {
                Ok(result) => {
                    energy = result.final_energy();
                    self.params = result.final_params.clone();
                    self.last_vite = Some(result);
                }
                Err(e) => {
                    log::warn!(
                        "VITE failed on episode {} step {}: {e}",
                        self.episode,
                        self.steps
                    );
                    failure = Some(FailureCause::Vite(e.to_string()));
                }
            }
        }
        if failure.is_none() {
            ctrl.observe(energy);
        }

        let status = if failure.is_some() {
            Status::Failure
        } else if energy < threshold {
            Status::Success
        } else if next.is_full() {
            failure = Some(FailureCause::GridFull);
            Status::Failure
        } else {
            Status::Running
        };

        let (reward, reward_clamped) = match self.config.reward {
            RewardVariant::V1 => (reward_v1(self.e_prev, energy, g, threshold), false),
            RewardVariant::V2 => {
                let r = reward_v2(self.e_prev, energy, g, threshold, self.e_bound);
                (r.value, r.clamped)
            }
        };

        self.grid = next;
        self.e_prev = energy;
        self.status = status;
        let outcome = EpisodeOutcome {
            status,
            final_energy: energy,
            gate_count: g,
            depth: d,
            steps: self.steps,
        };
        Ok(StepResult {
            reward,
            energy,
            outcome,
            failure,
            next_mask: self.valid_actions(),
            reward_clamped,
        })
    }

    fn optimize(&self, grid: &CircuitGrid) -> Result<ViteResult> {
        let circuit = grid.to_circuit();
        let cfg = self.config.vite.with_seed(step_seed(
            self.config.vite.seed,
            self.episode,
            self.steps as u64,
        ));
        if cfg.warm_start {
            run_vite_warm(&circuit, &self.ham, &cfg, &self.params)
        } else {
            run_vite(&circuit, &self.ham, &cfg)
        }
    }
}

/// Decorrelated VITE seed for one (episode, step) pair.
pub fn step_seed(base: u64, episode: u64, step: u64) -> u64 {
    let mut z = base
        ^ episode.wrapping_mul(0x9E37_79B9_7F4A_7C15)
        ^ step.wrapping_mul(0xD1B5_4A32_D192_ED03);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}
