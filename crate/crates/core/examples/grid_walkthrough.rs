//! Step the environment by hand: placement, masking, state encoding and
//! the per-step reward.
//!
//! `cargo run --example grid_walkthrough`

use vite_ddqn::env::{Action, EnvConfig, Environment, ThresholdController};
use vite_ddqn::hamiltonian::{maxcut_hamiltonian, Graph};

fn main() -> anyhow::Result<()> {
    let ham = maxcut_hamiltonian(&Graph::default_instance())?;
    let mut env = Environment::new(ham, EnvConfig::default())?;
    let mut ctrl = ThresholdController::evolving(-3.0);
    env.reset(0);
    for a in [
        Action::Ry,
        Action::Ry,
        Action::Cnot,
        Action::Ry,
        Action::Rz,
        Action::Ry,
    ] {
        let mask = env.valid_actions();
        if !mask[a.index()] {
            println!("{a} is masked here, mask {mask:?}");
            continue;
        }
        let r = env.step(a, &mut ctrl)?;
        println!(
            "{a:<4} E={:>9.6} reward={:>8.4} g={} D={} {}",
            r.energy,
            r.reward,
            r.outcome.gate_count,
            r.outcome.depth,
            r.outcome.status.as_str()
        );
        if r.outcome.status.is_terminal() {
            break;
        }
    }
    let state = env.grid().encode_state();
    println!(
        "state vector (first 12 of {}): {:?}",
        state.len(),
        &state[..12]
    );
    Ok(())
}
