use rand::Rng;

use super::network::QNetwork;
use crate::env::ActionMask;
use crate::error::{Error, Result};

/// ε for step `t` (≥ 1) of episode `nu` (≥ 1): max(Γ^{(ν−1)+(t−1)}, floor).
pub fn epsilon(nu: usize, t: usize, decay: f64, floor: f64) -> f64 {
    let k = nu.saturating_sub(1) + t.saturating_sub(1);
    decay.powf(k as f64).max(floor)
}

/// Index of the largest value among allowed entries, lowest index on ties.
pub fn masked_argmax(values: &[f64], mask: &ActionMask) -> Result<usize> {
    let mut best: Option<usize> = None;
    for (i, (&v, &ok)) in values.iter().zip(mask).enumerate() {
        if ok && best.is_none_or(|b| v > values[b]) {
            best = Some(i);
        }
    }
    best.ok_or(Error::EmptyMask)
}

/// ε-greedy over the legal actions.
pub fn select_action(
    online: &QNetwork,
    state: &[f64],
    mask: &ActionMask,
    eps: f64,
    rng: &mut impl Rng,
) -> Result<usize> {
    let valid: Vec<usize> = (0..mask.len()).filter(|&i| mask[i]).collect();
    if valid.is_empty() {
        return Err(Error::EmptyMask);
    }
    if rng.gen::<f64>() < eps {
        return Ok(valid[rng.gen_range(0..valid.len())]);
    }
    masked_argmax(&online.forward(state)?, mask)
}
