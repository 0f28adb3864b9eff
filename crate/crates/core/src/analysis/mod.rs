//! Expected-payoff estimation, best responses, incentive-compatibility
//! checks, budget audits and the probability bounds used to reason about
//! the subsidy.

mod bounds;
mod budget;
mod checks;
mod dynamics;
mod estimate;
mod search;

pub use bounds::{
    chernoff_tail_upper, floor_payoff, g_function, jensen_check, subsidy_prob_lower, ChernoffBound,
    JensenCheck,
};
pub use budget::{bb_audit, BudgetAudit, BudgetBounds, RATIO_SLACK};
pub use checks::{default_tolerance, docdic_check, ocdic_check, IcReport, MinerVerdict, Verdict};
pub use dynamics::{br_dynamics, BrDynamics};
pub use estimate::{
    expected_payoff_mc, monte_carlo, with_workers, DemandSource, McSummary, PayoffEstimate,
    PayoffProblem, WindowSource, MIN_REPLICAS,
};
pub use search::{
    best_response, best_response_floor, maximize, BestResponseResult, CurvePoint, SearchMethod, MIN_GRID_POINTS,
    SearchSettings,
};

use crate::model::{DemandModel, MinerProfile, PlatformParams};

/// Closed-form PPS expected reward with the expectation moved inside the
/// `min`: `(a_i/Σa)·b·min{k·Σa, μ_F}`.
///
/// Exact only when demand is constant and never binds (`M ≥ |D|` almost
/// surely); otherwise it is an approximation.
pub fn pps_expected_reward_closed(a_i: f64, sum_a: f64, params: &PlatformParams, mean_demand: f64) -> f64 {
    if sum_a <= 0.0 {
        return 0.0;
    }
    a_i / sum_a * params.base_reward * (params.productivity * sum_a).min(mean_demand)
}

/// True when `μ_F ≥ k·ΣA`.
pub fn demand_dominant(params: &PlatformParams, profiles: &[MinerProfile], demand: &DemandModel) -> bool {
    crate::model::demand_dominance_warning(params, profiles, demand).is_none()
}
