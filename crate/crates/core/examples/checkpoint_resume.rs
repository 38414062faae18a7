//! Interrupt a run, resume it from its checkpoint and compare the log with
//! an uninterrupted run.
//!
//! `cargo run --release --example checkpoint_resume`

use std::fs;

use vite_ddqn::harness::{run_training_in, RunConfig, EPISODES_CSV};

fn main() -> anyhow::Result<()> {
    let root = tempfile_dir("vite-ddqn-resume")?;
    let config = RunConfig {
        episodes: 40,
        checkpoint_every: 10,
        seed: 5,
        ..RunConfig::maxcut()
    };

    let full = root.join("full");
    run_training_in(&config, &full, false)?;

    let split = root.join("split");
    run_training_in(
        &RunConfig {
            episodes: 15,
            ..config.clone()
        },
        &split,
        false,
    )?;
    println!("stopped after 15 episodes");
    run_training_in(&config, &split, true)?;
    println!("resumed to {}", config.episodes);

    let same = fs::read(full.join(EPISODES_CSV))? == fs::read(split.join(EPISODES_CSV))?;
    println!("episode logs identical: {same}");
    Ok(())
}

fn tempfile_dir(name: &str) -> std::io::Result<std::path::PathBuf> {
    let dir = std::env::temp_dir().join(name);
    if dir.exists() {
        fs::remove_dir_all(&dir)?;
    }
    fs::create_dir_all(&dir)?;
    Ok(dir)
}
