use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// How a miner chooses its allocation each round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum MinerPolicy {
    /// Always deploy `allocation`.
    Static { allocation: f64 },
    /// Best-respond each round to the last announced demand, assuming the
    /// other miners run at their (public) capacities.
    MyopicBr { grid_points: usize, replicas: u64 },
    /// Back off toward `floor` after a round paid less than full rate
    /// (`δ < 1`), move back toward capacity otherwise.
    DeltaAdaptive { step: f64, floor: f64 },
}

impl MinerPolicy {
    pub fn validate(&self, field: &str, capacity: f64) -> Result<()> {
        match *self {
            MinerPolicy::Static { allocation } if !(allocation >= 0.0 && allocation <= capacity) => {
                Err(Error::invalid(
                    format!("{field}.allocation"),
                    format!("must lie in [0, {capacity}], got {allocation}"),
                ))
            }
            MinerPolicy::MyopicBr { grid_points, .. } if grid_points < crate::analysis::MIN_GRID_POINTS => Err(Error::invalid(
                format!("{field}.grid_points"),
                format!("must be at least {}, got {grid_points}", crate::analysis::MIN_GRID_POINTS),
            )),
            MinerPolicy::MyopicBr { replicas, .. } if replicas < crate::analysis::MIN_REPLICAS => {
                Err(Error::invalid(
                    format!("{field}.replicas"),
                    format!("must be at least {}, got {replicas}", crate::analysis::MIN_REPLICAS),
                ))
            }
            MinerPolicy::DeltaAdaptive { step, .. } if !(step > 0.0 && step <= 1.0) => Err(Error::invalid(
                format!("{field}.step"),
                format!("must lie in (0, 1], got {step}"),
            )),
            MinerPolicy::DeltaAdaptive { floor, .. } if !(floor >= 0.0 && floor <= capacity) => {
                Err(Error::invalid(
                    format!("{field}.floor"),
                    format!("must lie in [0, {capacity}], got {floor}"),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// What a miner learns about its own round once the round closes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observation {
    pub round: u64,
    pub announced_demand: f64,
    pub allocation: f64,
    pub difficulty: f64,
    pub reward: f64,
    /// Pro-rata scale factor inferred from the reward.
    pub delta: f64,
}

/// Next allocation of a δ-adaptive miner.
///
/// With no history the miner starts at capacity. A shortfall (`δ < 1`)
/// closes a fraction `step` of the gap to `floor`; a full-rate round
/// closes the same fraction of the gap to capacity.
pub fn delta_adaptive_policy(
    previous: f64,
    observations: &[Observation],
    capacity: f64,
    step: f64,
    floor: f64,
) -> f64 {
    let Some(last) = observations.last() else {
        return capacity;
    };
    let target = if last.delta < 1.0 { floor } else { capacity };
    (previous + (target - previous) * step).clamp(0.0, capacity)
}
