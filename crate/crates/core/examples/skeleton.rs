//! Trains briefly on Max-Cut, then extracts consensus skeletons from the
//! saved circuits and renders the run's plots.
//!
//! `cargo run --release --example skeleton -- [episodes] [support]`

use std::env;

use vite_ddqn::env::{Cell, ROWS};
use vite_ddqn::harness::{
    cell_frequencies, emit_plots, extract_skeleton, load_corpus, run_training, ProblemInstance,
    RunConfig,
};

fn main() -> anyhow::Result<()> {
    let mut args = env::args().skip(1);
    let episodes = args.next().map(|s| s.parse()).transpose()?.unwrap_or(60);
    let support = args.next().map(|s| s.parse()).transpose()?.unwrap_or(0.3);
    let dir = env::temp_dir().join("vite-ddqn-skeleton");
    let config = RunConfig {
        episodes,
        output_dir: dir,
        ..RunConfig::maxcut()
    };
    let out = run_training(&config)?;

    let corpus = load_corpus(&out.dir)?;
    println!(
        "{} successful circuits in {}",
        corpus.len(),
        out.dir.display()
    );
    if corpus.is_empty() {
        return Ok(());
    }
    let grids = corpus
        .iter()
        .map(|c| c.grid())
        .collect::<Result<Vec<_>, _>>()?;
    let freq = cell_frequencies(&grids)?;
    println!("modal gates (code:fraction), one row per qubit:");
    for row in 0..ROWS {
        let line: Vec<String> = (0..freq.columns.min(6))
            .map(|col| match freq.modal[col * ROWS + row] {
                Some((cell, f)) if cell != Cell::Empty => format!("{}:{f:.2}", cell.code()),
                _ => "  -   ".to_string(),
            })
            .collect();
        println!("  q{row} {}", line.join(" "));
    }

    let ham = ProblemInstance::from_config(&config)?.hamiltonian;
    for c in extract_skeleton(&corpus, support, &ham, &config.vite)? {
        println!(
            "support≥{:.2} g={} D={} E={:.6} reaches best: {}",
            c.support, c.gate_count, c.depth, c.energy, c.reaches_best_energy
        );
    }
    for p in emit_plots(&out.dir)? {
        println!("wrote {}", p.display());
    }
    Ok(())
}
