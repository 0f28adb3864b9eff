//! Domain types and the Gamma computing model.
//!
//! A miner deploying `a` power units completes `D ~ Gamma(k·a, 1)`
//! difficulty units per round, so `E[D] = k·a`. Allocating power has an
//! opportunity cost `C(a)` that is convex, strictly increasing and zero at
//! the origin.

mod cost;
mod demand;
mod params;
mod transcript;

pub use cost::{CostFunction, MinerProfile};
pub use demand::DemandModel;
pub use params::PlatformParams;
pub use transcript::{gamma_sample, sample_transcript, RoundTranscript, StrategyProfile};

/// Returns a warning when mean demand falls short of full-capacity supply,
/// the standing assumption behind the incentive results.
pub fn demand_dominance_warning(
    params: &PlatformParams,
    profiles: &[MinerProfile],
    demand: &DemandModel,
) -> Option<String> {
    let supply = params.productivity * profiles.iter().map(|p| p.capacity).sum::<f64>();
    let mean = demand.mean();
    (mean < supply).then(|| {
        format!(
            "mean demand {mean} is below full-capacity supply k·ΣA = {supply}; \
             incentive results that assume demand dominance may not apply"
        )
    })
}
