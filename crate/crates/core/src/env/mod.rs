//! Circuit-construction environment on a 4-qubit grid.

mod baseline;
mod grid;
mod reward;
mod step;
mod threshold;

pub use baseline::{su2_circuit, su2_grid};
pub use grid::{
    depth, encode_state, gate_count, run_circuit, Action, ActionMask, Cell, CircuitGrid,
    CircuitJson, COLUMNS, N_ACTIONS, ROWS,
};
pub use reward::{
    reward_v1, reward_v2, step_fn, NormalizedReward, RewardVariant, BONUS_WEIGHT, G_MAX,
};
pub use step::{
    step_seed, EnvConfig, Environment, EpisodeOutcome, FailureCause, Status, StepResult, D_MAX,
    ENERGY_RESOLUTION,
};
pub use threshold::{
    periodic_update, streak_update, ThresholdController, ThresholdEvent, ThresholdVariant,
    ADAPTIVE_MARGIN, ADAPTIVE_PERIOD, ADAPTIVE_STREAK, EVOLVING_MARGIN, EVOLVING_PERIOD, XI, XI0,
};
