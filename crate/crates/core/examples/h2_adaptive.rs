//! H2 ansatz design with the normalized reward and the adaptive threshold.
//!
//! `cargo run --release --example h2_adaptive -- [episodes] [seed]`

use std::env;

use vite_ddqn::harness::{run_training, RunConfig};

fn main() -> anyhow::Result<()> {
    env_logger::init();
    let mut args = env::args().skip(1);
    let episodes = args.next().map(|s| s.parse()).transpose()?.unwrap_or(200);
    let seed = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0);
    let dir = env::temp_dir().join(format!("vite-ddqn-h2-{seed}"));
    let config = RunConfig {
        episodes,
        seed,
        output_dir: dir,
        ..RunConfig::h2()
    };

    let out = run_training(&config)?;
    let s = &out.summary;
    println!(
        "E_HF {:.6}  E_FCI {:.6}  E_bound {:.6}",
        s.e_hf,
        s.e_fci.unwrap_or(f64::NAN),
        s.e_bound
    );
    for rec in out
        .records
        .iter()
        .filter(|r| r.episode % 10 == 0 || r.is_success())
    {
        println!(
            "{:>4} {:<8} E={:>10.6} thr={:>10.6} g={:>2} D={:>2}",
            rec.episode,
            rec.outcome.as_str(),
            rec.final_energy,
            rec.e_threshold,
            rec.gate_count,
            rec.depth
        );
    }
    println!("successes {}/{}", s.successes, s.episodes);
    println!("final threshold {:.6}", s.trials[0].final_threshold);
    println!("best success {:?}", s.trials[0].best_success);
    Ok(())
}
