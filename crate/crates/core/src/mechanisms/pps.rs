use super::{budget_ratio, scale_delta, RewardOutcome};
use crate::model::{PlatformParams, RoundTranscript};

/// `R_i = (D_i/|D|)·b·min{|D|, M}`, or 0 when `|D| = 0`.
pub fn pps_miner_reward(difficulty: f64, total: f64, demand: f64, base_reward: f64) -> f64 {
    if total > 0.0 {
        difficulty / total * base_reward * total.min(demand)
    } else {
        0.0
    }
}

pub fn pps_reward(transcript: &RoundTranscript, params: &PlatformParams) -> RewardOutcome {
    let rewards: Vec<f64> = transcript
        .difficulties
        .iter()
        .map(|&d| pps_miner_reward(d, transcript.total, transcript.demand, params.base_reward))
        .collect();
    RewardOutcome {
        budget_ratio: budget_ratio(&rewards, transcript.demand, params.price),
        scale_delta: scale_delta(transcript.total, transcript.demand),
        subsidy_flags: vec![false; rewards.len()],
        rewards,
    }
}
