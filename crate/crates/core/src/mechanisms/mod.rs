//! Reward mechanisms: plain pay-per-share (PPS) and pay-per-share with
//! subsidy (PPSS).
//!
//! Both pay a miner its share `D_i/|D|` of the served difficulty
//! `min{|D|, M}` at a per-unit rate. PPS uses the flat base rate `b`. PPSS
//! adds a subsidy `(c̃_i/k − b)/K_i(D_i)` for miners whose recent output
//! clears the `λ·A_i·k` per-round threshold.

mod pps;
mod ppss;
mod window;

use serde::{Deserialize, Serialize};

pub use pps::{pps_miner_reward, pps_reward};
pub use ppss::{ppss_miner_reward, ppss_reward, subsidy_factor, subsidy_indicator, subsidy_shape};
pub use window::RollingWindow;

use crate::error::Result;
use crate::model::{MinerProfile, PlatformParams, RoundTranscript};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mechanism {
    Pps,
    Ppss,
}

impl std::fmt::Display for Mechanism {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Mechanism::Pps => "pps",
            Mechanism::Ppss => "ppss",
        })
    }
}

/// Rewards paid for one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardOutcome {
    pub rewards: Vec<f64>,
    /// `δ = min{|D|, M}/|D|`, or 1 when nothing was produced.
    pub scale_delta: f64,
    /// `Σ R_i / (M·p)`
    pub budget_ratio: f64,
    /// Subsidy indicator `B_i` per miner; all false under PPS.
    pub subsidy_flags: Vec<bool>,
}

pub fn scale_delta(total: f64, demand: f64) -> f64 {
    if total > 0.0 {
        total.min(demand) / total
    } else {
        1.0
    }
}

pub fn budget_ratio(rewards: &[f64], demand: f64, price: f64) -> f64 {
    rewards.iter().sum::<f64>() / (demand * price)
}

/// Applies `mechanism` to a transcript. `windows` hold each miner's
/// completed-round history and are ignored by PPS.
pub fn reward(
    mechanism: Mechanism,
    transcript: &RoundTranscript,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    windows: &[RollingWindow],
) -> Result<RewardOutcome> {
    match mechanism {
        Mechanism::Pps => Ok(pps_reward(transcript, params)),
        Mechanism::Ppss => ppss_reward(transcript, params, profiles, windows),
    }
}
