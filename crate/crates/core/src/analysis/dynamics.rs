use super::estimate::{DemandSource, PayoffProblem, WindowSource};
use super::search::SearchSettings;
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{DemandModel, MinerProfile, PlatformParams, StrategyProfile};

#[derive(Debug, Clone, PartialEq)]
pub struct BrDynamics {
    /// Profiles visited, starting with the initial one.
    pub trajectory: Vec<Vec<f64>>,
    /// Set when two successive profiles differ by less than `tol` in the
    /// max norm.
    pub fixed_point: Option<Vec<f64>>,
}

impl BrDynamics {
    pub fn converged(&self) -> bool {
        self.fixed_point.is_some()
    }

    pub fn iterations(&self) -> usize {
        self.trajectory.len() - 1
    }
}

/// Synchronous best-response iteration: every miner best-responds to the
/// previous profile, then all move at once.
#[allow(clippy::too_many_arguments)]
pub fn br_dynamics(
    mechanism: Mechanism,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    demand: &DemandModel,
    start: &StrategyProfile,
    max_iters: usize,
    tol: f64,
    settings: &SearchSettings,
) -> Result<BrDynamics> {
    if max_iters == 0 {
        return Err(Error::Precondition("max_iters must be at least 1".into()));
    }
    let mut current = start.clone();
    let mut trajectory = vec![current.as_slice().to_vec()];
    for _ in 0..max_iters {
        let next = (0..profiles.len())
            .map(|i| {
                let problem = PayoffProblem {
                    mechanism,
                    miner: i,
                    params,
                    profiles,
                    demand: DemandSource::Model(*demand),
                    window: WindowSource::Warm,
                };
                Ok(problem.best_response(&current, settings)?.argmax)
            })
            .collect::<Result<Vec<f64>>>()?;
        let moved = next
            .iter()
            .zip(current.as_slice())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        current = StrategyProfile::new(next, profiles)?;
        trajectory.push(current.as_slice().to_vec());
        if moved < tol {
            return Ok(BrDynamics {
                fixed_point: Some(current.as_slice().to_vec()),
                trajectory,
            });
        }
    }
    Ok(BrDynamics { trajectory, fixed_point: None })
}
