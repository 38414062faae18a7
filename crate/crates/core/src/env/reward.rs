use serde::{Deserialize, Serialize};

/// Gate budget g_max.
pub const G_MAX: usize = 30;
/// Weight c of the compactness bonus in [`reward_v1`].
pub const BONUS_WEIGHT: f64 = 0.1;
const MIN_DENOMINATOR: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RewardVariant {
    /// Raw energy drop plus c·(g_max − g) on success.
    V1,
    /// Energy drop normalized by the distance to E_bound plus (g_max − g)/g_max on success.
    V2,
}

impl std::str::FromStr for RewardVariant {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "v1" => Ok(Self::V1),
            "v2" => Ok(Self::V2),
            other => Err(format!(
                "unknown reward variant '{other}' (expected v1 or v2)"
            )),
        }
    }
}

/// Θ(x) with Θ(0) = 0.
pub fn step_fn(x: f64) -> f64 {
    if x > 0.0 {
        1.0
    } else {
        0.0
    }
}

fn remaining(g: usize) -> f64 {
    G_MAX.saturating_sub(g) as f64
}

pub fn reward_v1(e_prev: f64, e_curr: f64, g: usize, e_threshold: f64) -> f64 {
    (e_prev - e_curr) + BONUS_WEIGHT * remaining(g) * step_fn(e_threshold - e_curr)
}

/// Normalized reward and whether the denominator had to be clamped.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NormalizedReward {
    pub value: f64,
    pub clamped: bool,
}

pub fn reward_v2(
    e_prev: f64,
    e_curr: f64,
    g: usize,
    e_threshold: f64,
    e_bound: f64,
) -> NormalizedReward {
    let gap = e_prev - e_bound;
    let clamped = !(gap > MIN_DENOMINATOR);
    let denom = if clamped { MIN_DENOMINATOR } else { gap };
    let value =
        (e_prev - e_curr) / denom + remaining(g) / G_MAX as f64 * step_fn(e_threshold - e_curr);
    NormalizedReward { value, clamped }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn v1_worked_values() {
        assert!((reward_v1(0.0, -3.0, 4, 0.0) - 5.6).abs() < 1e-12);
        assert_eq!(reward_v1(0.0, -1.0, 4, -1.0), 1.0);
        assert_eq!(reward_v1(-0.5, -0.5, 3, -1.0), 0.0);
    }

    #[test]
    fn v2_worked_values() {
        let r = reward_v2(-1.0, -1.1, 21, -1.2, -1.985);
        assert!((r.value - 0.1 / 0.985).abs() < 1e-12);
        assert!(!r.clamped);
        let r = reward_v2(-1.0, -1.1, 21, -1.05, -1.985);
        assert!((r.value - (0.1 / 0.985 + 0.3)).abs() < 1e-12);
        assert_eq!(reward_v2(-1.0, -1.0, 5, -2.0, -1.985).value, 0.0);
    }

    #[test]
    fn v2_guard_flags_clamp() {
        let r = reward_v2(-2.0, -2.0, 5, -3.0, -2.0);
        assert!(r.clamped);
        assert_eq!(r.value, 0.0);
    }
}
