//! A repeated PPSS game where one miner re-optimizes every round from the
//! last announced demand and its own subsidy history.
//!
//! cargo run --example myopic_miners

use poolsim::mechanisms::Mechanism;
use poolsim::model::{CostFunction, DemandModel, MinerProfile, PlatformParams};
use poolsim::sim::{MinerPolicy, Scenario, Simulation};

fn main() -> poolsim::Result<()> {
    let params = PlatformParams { productivity: 4.0, lambda: 0.6, window: 4, ..Default::default() };
    let miners = vec![
        MinerProfile::new(0, 2.0, CostFunction::Linear { rate: 6.0 })?,
        MinerProfile::new(1, 2.0, CostFunction::Linear { rate: 2.0 })?,
    ];
    let scenario = Scenario {
        params,
        policies: vec![
            MinerPolicy::MyopicBr { grid_points: 64, replicas: 2_000 },
            MinerPolicy::Static { allocation: 2.0 },
        ],
        miners,
        demand: DemandModel::LogNormal { mu: 2.8, sigma: 0.3 },
        mechanism: Mechanism::Ppss,
        rounds: 12,
    };
    let mut sim = Simulation::new(scenario, 17)?;
    println!("round      M      a_0    D_0   subsidy  reward_0");
    while !sim.is_finished() {
        let r = sim.step_round()?;
        println!(
            "{:5} {:7.2} {:8.3} {:6.2} {:>8} {:9.3}",
            r.round, r.demand, r.allocations[0], r.difficulties[0], r.subsidy_flags[0], r.rewards[0]
        );
    }
    let ledger = sim.ledger();
    println!("mean payoffs: {:.3}, {:.3}", ledger.mean_payoff(0), ledger.mean_payoff(1));
    Ok(())
}
