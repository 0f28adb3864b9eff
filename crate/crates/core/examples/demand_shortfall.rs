//! When demand falls short of supply, pay-per-share rewards shrink by
//! `δ = M/|D|` and a miner gains by holding power back.
//!
//! Shows the interior per-round best response, then lets a δ-adaptive
//! miner play against a full-power miner over 200 rounds.
//!
//! cargo run --example demand_shortfall

use poolsim::analysis::{docdic_check, SearchSettings};
use poolsim::mechanisms::Mechanism;
use poolsim::model::{CostFunction, DemandModel, MinerProfile, PlatformParams};
use poolsim::sim::{run_simulation, MinerPolicy, Scenario};

fn main() -> poolsim::Result<()> {
    let params = PlatformParams { productivity: 10.0, ..Default::default() };
    let miners = vec![
        MinerProfile::new(0, 1.0, CostFunction::Linear { rate: 1.0 })?,
        MinerProfile::new(1, 1.0, CostFunction::Linear { rate: 1.0 })?,
    ];
    let settings = SearchSettings { grid_points: 64, replicas: 10_000, seed: 3 };
    let report = docdic_check(Mechanism::Pps, &params, &miners, 2.0, &[], &settings, None)?;
    let v = &report.miners[0];
    println!("announced M = 2, other miner at A: best response {:.4} ({})", v.response.argmax, v.verdict);
    println!("stationary point of (a/(a+1))·2 − a: {:.4}", 2f64.sqrt() - 1.0);

    let demand = DemandModel::Constant { value: 2.0 };
    let baseline = Scenario::full_power(params, miners, demand, Mechanism::Pps, 200);
    let mut adaptive = baseline.clone();
    adaptive.policies[0] = MinerPolicy::DeltaAdaptive { step: 0.5, floor: 0.4 };
    for seed in 1..=3 {
        let a = run_simulation(&adaptive, seed)?;
        let s = run_simulation(&baseline, seed)?;
        println!(
            "seed {seed}: adaptive miner mean payoff {:.4} (mean a {:.3}), static miner {:.4}",
            a.mean_payoff(0),
            a.mean_allocation(0),
            s.mean_payoff(0)
        );
    }
    Ok(())
}
