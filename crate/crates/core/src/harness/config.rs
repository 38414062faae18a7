use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::ddqn::AgentConfig;
use crate::env::{RewardVariant, ThresholdVariant};
use crate::error::{Error, Result};
use crate::vite::ViteConfig;

/// Environment variable naming the directory relative output paths live under.
pub const OUTPUT_ROOT_ENV: &str = "VITE_DDQN_OUTPUT_ROOT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Problem {
    Maxcut,
    H2,
}

impl Problem {
    pub fn as_str(self) -> &'static str {
        match self {
            Problem::Maxcut => "maxcut",
            Problem::H2 => "h2",
        }
    }
}

impl std::str::FromStr for Problem {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "maxcut" => Ok(Self::Maxcut),
            "h2" => Ok(Self::H2),
            other => Err(format!("unknown problem '{other}' (expected maxcut or h2)")),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub problem: Problem,
    pub reward: RewardVariant,
    pub threshold: ThresholdVariant,
    pub episodes: usize,
    pub trials: usize,
    pub seed: u64,
    pub output_dir: PathBuf,
    pub agent: AgentConfig,
    pub vite: ViteConfig,
    /// Max-Cut graph file; the built-in 4-vertex path when absent.
    pub graph: Option<PathBuf>,
    /// Molecular Hamiltonian table; the embedded H₂ table when absent.
    pub molecule: Option<PathBuf>,
    /// Episodes between checkpoints (0 = only at the end of a trial).
    pub checkpoint_every: usize,
    /// Run trials on the rayon pool instead of one after another.
    pub parallel: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self {
            problem: Problem::Maxcut,
            reward: RewardVariant::V1,
            threshold: ThresholdVariant::Evolving,
            episodes: 150,
            trials: 1,
            seed: 0,
            output_dir: PathBuf::from("runs/latest"),
            agent: AgentConfig::default(),
            vite: ViteConfig::default(),
            graph: None,
            molecule: None,
            checkpoint_every: 25,
            parallel: false,
        }
    }
}

impl RunConfig {
    /// Max-Cut with the raw reward and evolving threshold.
    pub fn maxcut() -> Self {
        Self::default()
    }

    /// H₂ with the normalized reward, adaptive threshold and slow ε decay.
    pub fn h2() -> Self {
        Self {
            problem: Problem::H2,
            reward: RewardVariant::V2,
            threshold: ThresholdVariant::Adaptive,
            episodes: 500,
            agent: AgentConfig::extended(),
            ..Self::default()
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::Config(format!("invalid run config: {e}")))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    pub fn validate(&self) -> Result<()> {
        if self.trials == 0 {
            return Err(Error::Config("trials must be at least 1".into()));
        }
        self.agent.validate()?;
        self.vite.validate()
    }

    /// `output_dir`, placed under `root` when it is relative.
    pub fn resolved_output(&self, root: Option<&Path>) -> PathBuf {
        match root {
            Some(r) if self.output_dir.is_relative() => r.join(&self.output_dir),
            _ => self.output_dir.clone(),
        }
    }
}
