use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const EVOLVING_MARGIN: f64 = 0.01;
pub const EVOLVING_PERIOD: usize = 10;
pub const EVOLVING_INITIAL: f64 = 0.0;
pub const EVOLVING_FLOOR_FACTOR: f64 = 0.9;
pub const XI0: f64 = 0.005;
pub const XI: f64 = 0.005;
pub const ADAPTIVE_MARGIN: f64 = 0.0005;
pub const ADAPTIVE_PERIOD: usize = 200;
pub const ADAPTIVE_STREAK: usize = 20;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ThresholdVariant {
    Evolving,
    Adaptive,
}

impl std::str::FromStr for ThresholdVariant {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "evolving" => Ok(Self::Evolving),
            "adaptive" => Ok(Self::Adaptive),
            other => Err(format!(
                "unknown threshold variant '{other}' (expected evolving or adaptive)"
            )),
        }
    }
}

/// Threshold updates triggered at episode boundaries.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ThresholdEvent {
    /// Every tenth success (evolving).
    SuccessMilestone,
    /// Every `ADAPTIVE_PERIOD` episodes (adaptive, relaxing).
    Periodic,
    /// `ADAPTIVE_STREAK` successes in a row (adaptive, tightening).
    Streak,
}

/// Success threshold E_threshold and the bookkeeping that moves it.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ThresholdController {
    variant: ThresholdVariant,
    threshold: f64,
    best: f64,
    floor: f64,
    success_count: usize,
    consecutive_successes: usize,
    episode_counter: usize,
}

impl ThresholdController {
    /// Starts at 0.0 with floor 0.9·E_min.
    pub fn evolving(e_min: f64) -> Self {
        Self::with_state(
            ThresholdVariant::Evolving,
            EVOLVING_INITIAL,
            EVOLVING_FLOOR_FACTOR * e_min,
        )
    }

    /// Starts at E_HF + ξ₀ with floor E_bound.
    pub fn adaptive(e_hf: f64, e_bound: f64) -> Self {
        Self::with_state(ThresholdVariant::Adaptive, e_hf + XI0, e_bound)
    }

    fn with_state(variant: ThresholdVariant, threshold: f64, floor: f64) -> Self {
        Self {
            variant,
            threshold: threshold.max(floor),
            best: f64::INFINITY,
            floor,
            success_count: 0,
            consecutive_successes: 0,
            episode_counter: 0,
        }
    }

    /// Controller with an explicit starting point, for replaying recorded sequences.
    pub fn from_parts(
        variant: ThresholdVariant,
        threshold: f64,
        best: f64,
        floor: f64,
    ) -> Result<Self> {
        if !floor.is_finite() || !threshold.is_finite() {
            return Err(Error::Config("threshold and floor must be finite".into()));
        }
        let mut c = Self::with_state(variant, threshold, floor);
        c.best = best;
        Ok(c)
    }

    pub fn variant(&self) -> ThresholdVariant {
        self.variant
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }

    /// Lowest energy observed so far; +∞ before the first observation.
    pub fn best(&self) -> f64 {
        self.best
    }

    pub fn floor(&self) -> f64 {
        self.floor
    }

    pub fn success_count(&self) -> usize {
        self.success_count
    }

    pub fn consecutive_successes(&self) -> usize {
        self.consecutive_successes
    }

    pub fn episode_counter(&self) -> usize {
        self.episode_counter
    }

    pub fn is_success(&self, energy: f64) -> bool {
        energy < self.threshold
    }

    pub fn observe(&mut self, energy: f64) {
        if energy < self.best {
            self.best = energy;
        }
    }

    /// Books one finished episode and fires whichever updates are due.
    /// Returns the events that fired, in the order applied.
    pub fn end_episode(&mut self, success: bool) -> Vec<ThresholdEvent> {
        self.episode_counter += 1;
        if success {
            self.success_count += 1;
            self.consecutive_successes += 1;
        } else {
            self.consecutive_successes = 0;
        }
        let mut fired = Vec::new();
        match self.variant {
            ThresholdVariant::Evolving => {
                if success && self.success_count % EVOLVING_PERIOD == 0 {
                    fired.push(ThresholdEvent::SuccessMilestone);
                }
            }
            ThresholdVariant::Adaptive => {
                if self.consecutive_successes >= ADAPTIVE_STREAK {
                    fired.push(ThresholdEvent::Streak);
                }
                if self.episode_counter % ADAPTIVE_PERIOD == 0 {
                    fired.push(ThresholdEvent::Periodic);
                }
            }
        }
        for e in &fired {
            self.apply(*e);
        }
        fired
    }

    /// Applies one update rule and clamps to the floor. No-op before any
    /// energy has been observed.
    pub fn apply(&mut self, event: ThresholdEvent) {
        if !self.best.is_finite() {
            return;
        }
        let next = match event {
            ThresholdEvent::SuccessMilestone => self.best - EVOLVING_MARGIN,
            ThresholdEvent::Periodic => periodic_update(self.threshold, self.best, XI),
            ThresholdEvent::Streak => {
                self.consecutive_successes = 0;
                streak_update(self.threshold, self.best, ADAPTIVE_MARGIN)
            }
        };
        self.threshold = next.max(self.floor);
    }
}

/// Relaxing rule: +ξ below E_best, else reset to E_best + ξ.
pub fn periodic_update(threshold: f64, best: f64, xi: f64) -> f64 {
    if threshold < best {
        threshold + xi
    } else {
        best + xi
    }
}

/// Tightening rule: snap up to E_best if below it, else lower by ε.
pub fn streak_update(threshold: f64, best: f64, eps: f64) -> f64 {
    if threshold < best {
        best
    } else {
        threshold - eps
    }
}
