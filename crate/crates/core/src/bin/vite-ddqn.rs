use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use vite_ddqn::env::{RewardVariant, ThresholdVariant};
use vite_ddqn::harness::{
    emit_plots, evaluate_baseline, extract_skeleton, load_corpus, resume_training, run_training,
    Problem, ProblemInstance, RunConfig, OUTPUT_ROOT_ENV, SUMMARY_FILE,
};
use vite_ddqn::vite::ViteConfig;
use vite_ddqn::Error;

#[derive(Parser)]
#[command(
    name = "vite-ddqn",
    version,
    about = "Reinforcement-learned ansatz design for VITE"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Train the DDQN designer and log every episode.
    Train(TrainArgs),
    /// Run VITE on the hardware-efficient SU(2) ansatz.
    Baseline {
        #[arg(long, default_value = "maxcut")]
        problem: Problem,
        #[arg(long, default_value_t = 1)]
        reps: usize,
    },
    /// Extract consensus skeletons from a directory of circuit JSONs.
    Skeleton {
        #[arg(long)]
        corpus: PathBuf,
        #[arg(long, default_value_t = 0.5)]
        support: f64,
        /// Hamiltonian used for re-scoring; read from the run summary when omitted.
        #[arg(long)]
        problem: Option<Problem>,
        /// Write the candidates here as JSON.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render the per-episode SVG plots of a run.
    Plot {
        #[arg(long)]
        run: PathBuf,
    },
}

#[derive(clap::Args)]
struct TrainArgs {
    /// JSON run configuration; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    problem: Option<Problem>,
    #[arg(long)]
    reward: Option<RewardVariant>,
    #[arg(long)]
    threshold: Option<ThresholdVariant>,
    #[arg(long)]
    episodes: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    checkpoint_every: Option<usize>,
    /// Run trials in parallel (episode logs stay identical per trial).
    #[arg(long)]
    parallel: bool,
    /// Continue trials from their checkpoints.
    #[arg(long)]
    resume: bool,
    /// Directory that relative output paths are resolved against.
    #[arg(long, env = OUTPUT_ROOT_ENV)]
    output_root: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Train(args) => train(args),
        Command::Baseline { problem, reps } => {
            let report = evaluate_baseline(problem, reps)?;
            println!(
                "{} SU(2) reps={}: g={} D={} E={:.10} (exact {:.10}, gap {:.3e}, converged {})",
                problem.as_str(),
                reps,
                report.gate_count,
                report.depth,
                report.final_energy,
                report.e_min,
                report.gap,
                report.converged
            );
            Ok(())
        }
        Command::Skeleton {
            corpus,
            support,
            problem,
            out,
        } => skeleton(&corpus, support, problem, out.as_deref()),
        Command::Plot { run } => {
            for f in emit_plots(&run)? {
                println!("{}", f.display());
            }
            Ok(())
        }
    }
}

fn train(args: TrainArgs) -> Result<(), Error> {
    let mut config = match &args.config {
        Some(p) => RunConfig::load(p)?,
        None => match args.problem {
            Some(Problem::H2) => RunConfig::h2(),
            _ => RunConfig::maxcut(),
        },
    };
    if let Some(p) = args.problem {
        config.problem = p;
    }
    if let Some(r) = args.reward {
        config.reward = r;
    }
    if let Some(t) = args.threshold {
        config.threshold = t;
    }
    if let Some(n) = args.episodes {
        config.episodes = n;
    }
    if let Some(n) = args.trials {
        config.trials = n;
    }
    if let Some(s) = args.seed {
        config.seed = s;
    }
    if let Some(o) = args.out {
        config.output_dir = o;
    }
    if let Some(k) = args.checkpoint_every {
        config.checkpoint_every = k;
    }
    config.parallel |= args.parallel;
    config.output_dir = config.resolved_output(args.output_root.as_deref());

    let out = if args.resume {
        resume_training(&config)?
    } else {
        run_training(&config)?
    };
    let s = &out.summary;
    println!(
        "{} episodes, {} successes ({:.2}%), min energy {}",
        s.episodes,
        s.successes,
        100.0 * s.success_rate,
        s.min_energy.map_or("n/a".into(), |e| format!("{e:.8}"))
    );
    for t in &s.trials {
        if let Some(c) = &t.most_compact_success {
            println!(
                "trial {}: most compact success g={} D={} E={:.8} (episode {})",
                t.trial, c.gate_count, c.depth, c.energy, c.episode
            );
        }
    }
    println!("run directory: {}", out.dir.display());
    Ok(())
}

fn skeleton(
    corpus: &Path,
    support: f64,
    problem: Option<Problem>,
    out: Option<&Path>,
) -> Result<(), Error> {
    let problem = match problem {
        Some(p) => p,
        None => summary_problem(corpus).unwrap_or(Problem::Maxcut),
    };
    let circuits = load_corpus(corpus)?;
    let instance = ProblemInstance::build(problem)?;
    let candidates = extract_skeleton(
        &circuits,
        support,
        &instance.hamiltonian,
        &ViteConfig::default(),
    )?;
    println!("{} circuits, support {support}", circuits.len());
    if candidates.is_empty() {
        println!("empty skeleton: no cell reaches the support");
    }
    for c in &candidates {
        println!(
            "support ≥ {:.3}: g={} D={} E={:.8} reaches corpus best: {}",
            c.support, c.gate_count, c.depth, c.energy, c.reaches_best_energy
        );
        print!("{}", c.grid);
    }
    if let Some(path) = out {
        fs::write(path, serde_json::to_vec_pretty(&candidates)?)?;
    }
    Ok(())
}

/// Problem recorded in `summary.json` at or above the corpus directory.
fn summary_problem(corpus: &Path) -> Option<Problem> {
    corpus.ancestors().find_map(|d| {
        let text = fs::read_to_string(d.join(SUMMARY_FILE)).ok()?;
        let v: serde_json::Value = serde_json::from_str(&text).ok()?;
        v.get("config")?.get("problem")?.as_str()?.parse().ok()
    })
}
