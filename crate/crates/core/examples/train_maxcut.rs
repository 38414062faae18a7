//! Trains a DDQN agent to design a Max-Cut ansatz.
//!
//! `cargo run --release --example train_maxcut -- [episodes] [seed]`

use std::env;

use vite_ddqn::harness::{run_training, RunConfig};

fn main() -> anyhow::Result<()> {
    env_logger::init();
    let mut args = env::args().skip(1);
    let episodes = args.next().map(|s| s.parse()).transpose()?.unwrap_or(150);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let dir = env::temp_dir().join(format!("vite-ddqn-maxcut-{seed}"));
    let config = RunConfig {
        episodes,
        seed,
        output_dir: dir,
        ..RunConfig::maxcut()
    };

    let out = run_training(&config)?;
    let r = &out.records;
    for rec in r {
        println!(
            "{:>4} {:<8} E={:>9.5} g={:>2} D={:>2} R={:>7.3} thr={:>8.4} eps={:.3}",
            rec.episode,
            rec.outcome.as_str(),
            rec.final_energy,
            rec.gate_count,
            rec.depth,
            rec.cumulative_reward,
            rec.e_threshold,
            rec.epsilon_at_end
        );
    }
    let mean_g = |s: &[vite_ddqn::harness::EpisodeRecord]| {
        s.iter().map(|x| x.gate_count as f64).sum::<f64>() / s.len().max(1) as f64
    };
    let k = r.len().min(20);
    println!("successes: {}/{}", out.summary.successes, r.len());
    println!(
        "mean g first {k}: {:.2}, last {k}: {:.2}",
        mean_g(&r[..k]),
        mean_g(&r[r.len() - k..])
    );
    println!(
        "most compact success: {:?}",
        out.summary.trials[0].most_compact_success
    );
    println!("run directory: {}", out.dir.display());
    Ok(())
}
