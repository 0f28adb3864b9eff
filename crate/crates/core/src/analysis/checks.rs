use super::estimate::{DemandSource, PayoffProblem, WindowSource};
use super::search::{best_response_floor, BestResponseResult, SearchSettings};
use crate::error::{Error, Result};
use crate::mechanisms::{Mechanism, RollingWindow};
use crate::model::{DemandModel, MinerProfile, PlatformParams, StrategyProfile};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    fn from_bool(ok: bool) -> Self {
        if ok {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MinerVerdict {
    pub miner: usize,
    /// Full capacity `A_i`, the allocation incentive compatibility demands.
    pub target: f64,
    pub tolerance: f64,
    /// Best response on the objective that decides the verdict.
    pub response: BestResponseResult,
    /// Argmax of the Monte Carlo expected payoff when the verdict was
    /// decided on a different objective.
    pub expected_payoff_argmax: Option<f64>,
    pub verdict: Verdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IcReport {
    pub miners: Vec<MinerVerdict>,
}

impl IcReport {
    pub fn all_pass(&self) -> bool {
        self.miners.iter().all(|m| m.verdict == Verdict::Pass)
    }
}

/// Two cells of the search grid on `[0, capacity]`.
pub fn default_tolerance(capacity: f64, grid_points: usize) -> f64 {
    2.0 * capacity / (grid_points - 1) as f64
}

fn verdict_for(
    miner: usize,
    profile: &MinerProfile,
    response: BestResponseResult,
    expected_payoff_argmax: Option<f64>,
    tol_a: Option<f64>,
    grid_points: usize,
) -> MinerVerdict {
    let tolerance = tol_a.unwrap_or_else(|| default_tolerance(profile.capacity, grid_points));
    MinerVerdict {
        miner,
        target: profile.capacity,
        tolerance,
        verdict: Verdict::from_bool((response.argmax - profile.capacity).abs() <= tolerance),
        response,
        expected_payoff_argmax,
    }
}

/// Opportunity-cost-driven incentive compatibility: each miner's best
/// response, with everyone else at full capacity, must be its capacity.
///
/// PPS is judged on the Monte Carlo expected payoff. PPSS is judged on the
/// lower bound `a·c̃ − C(a)`; the expected-payoff argmax is still computed
/// and reported alongside.
pub fn ocdic_check(
    mechanism: Mechanism,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    demand: &DemandModel,
    settings: &SearchSettings,
    tol_a: Option<f64>,
) -> Result<IcReport> {
    let others = StrategyProfile::full(profiles);
    let miners = (0..profiles.len())
        .map(|i| {
            let problem = PayoffProblem {
                mechanism,
                miner: i,
                params,
                profiles,
                demand: DemandSource::Model(*demand),
                window: WindowSource::Warm,
            };
            let mc = problem.best_response(&others, settings)?;
            Ok(match mechanism {
                Mechanism::Pps => verdict_for(i, &profiles[i], mc, None, tol_a, settings.grid_points),
                Mechanism::Ppss => {
                    let floor = best_response_floor(&profiles[i], settings.grid_points)?;
                    verdict_for(i, &profiles[i], floor, Some(mc.argmax), tol_a, settings.grid_points)
                }
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IcReport { miners })
}

/// Per-round incentive compatibility: best response of the immediate
/// expected payoff given the announced demand and each miner's current
/// window, others at full capacity.
pub fn docdic_check(
    mechanism: Mechanism,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    realized_demand: f64,
    windows: &[RollingWindow],
    settings: &SearchSettings,
    tol_a: Option<f64>,
) -> Result<IcReport> {
    if !(realized_demand > 0.0) {
        return Err(Error::Domain { what: "realized demand", value: realized_demand });
    }
    if mechanism == Mechanism::Ppss && windows.len() != profiles.len() {
        return Err(Error::Precondition(format!(
            "{} windows for {} miners",
            windows.len(),
            profiles.len()
        )));
    }
    let others = StrategyProfile::full(profiles);
    let miners = (0..profiles.len())
        .map(|i| {
            let window = windows
                .get(i)
                .cloned()
                .unwrap_or_else(|| RollingWindow::new(params.window));
            let problem = PayoffProblem {
                mechanism,
                miner: i,
                params,
                profiles,
                demand: DemandSource::Realized(realized_demand),
                window: WindowSource::Given(window),
            };
            let br = problem.best_response(&others, settings)?;
            Ok(verdict_for(i, &profiles[i], br, None, tol_a, settings.grid_points))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(IcReport { miners })
}
