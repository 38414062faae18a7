//! Training runs, baselines, skeleton extraction and plots.

mod baseline;
mod config;
mod plot;
mod problem;
mod records;
mod skeleton;
mod train;

pub use baseline::{evaluate_baseline, evaluate_baseline_with, BaselineReport};
pub use config::{Problem, RunConfig, OUTPUT_ROOT_ENV};
pub use plot::{emit_plots, episode_means, EpisodeMeans};
pub use problem::ProblemInstance;
pub use records::{read_records, write_records, EpisodeRecord, CSV_HEADER, EPISODES_CSV};
pub use skeleton::{
    cell_frequencies, extract_skeleton, load_corpus, CellFrequencies, SkeletonCandidate,
    SKELETON_ENERGY_TOL,
};
pub use train::{
    circuit_path, resume_training, run_training, run_training_in, run_trial, summarize_trial,
    trial_dir, CircuitSummary, RunOutput, RunSummary, TrialCheckpoint, TrialSummary,
    CHECKPOINT_FILE, CHECKPOINT_VERSION, SUMMARY_FILE,
};
