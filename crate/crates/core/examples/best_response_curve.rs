//! Expected payoff as a function of one miner's allocation, under PPS and
//! PPSS, with the other miners at full capacity.
//!
//! cargo run --example best_response_curve

use poolsim::analysis::{best_response_floor, DemandSource, PayoffProblem, SearchSettings, WindowSource};
use poolsim::mechanisms::Mechanism;
use poolsim::model::{CostFunction, DemandModel, MinerProfile, PlatformParams, StrategyProfile};

fn main() -> poolsim::Result<()> {
    let settings = SearchSettings { grid_points: 64, replicas: 20_000, seed: 1 };

    let pps = PlatformParams { productivity: 2.0, ..Default::default() };
    for rate in [1.0, 3.0] {
        let profiles = vec![
            MinerProfile::new(0, 1.0, CostFunction::Linear { rate })?,
            MinerProfile::new(1, 2.0, CostFunction::Linear { rate: 1.0 })?,
        ];
        let problem = PayoffProblem {
            mechanism: Mechanism::Pps,
            miner: 0,
            params: &pps,
            profiles: &profiles,
            demand: DemandSource::Model(DemandModel::Constant { value: 18.0 }),
            window: WindowSource::Warm,
        };
        let br = problem.best_response(&StrategyProfile::full(&profiles), &settings)?;
        println!("PPS, r = {rate} vs b·k = 2: argmax {:.4}, payoff {:.4}", br.argmax, br.value);
    }

    let ppss = PlatformParams { productivity: 100.0, lambda: 0.8, ..Default::default() };
    let profiles = vec![MinerProfile::new(0, 1.0, CostFunction::Linear { rate: 150.0 })?];
    let problem = PayoffProblem {
        mechanism: Mechanism::Ppss,
        miner: 0,
        params: &ppss,
        profiles: &profiles,
        demand: DemandSource::Model(DemandModel::Constant { value: 300.0 }),
        window: WindowSource::Warm,
    };
    let br = problem.best_response(&StrategyProfile::full(&profiles), &settings)?;
    let floor = best_response_floor(&profiles[0], 64)?;
    println!("\nPPSS, c̃ = 150, k = 100, λ = 0.8");
    println!("      a     payoff       ci");
    for p in br.curve.iter().step_by(7) {
        println!("{:7.4} {:10.2} {:8.2}", p.a, p.payoff, p.ci);
    }
    println!("expected-payoff argmax {:.4}, floor-payoff argmax {:.4}", br.argmax, floor.argmax);
    Ok(())
}
