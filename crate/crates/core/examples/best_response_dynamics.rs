//! Synchronous best-response iteration for two symmetric PPS miners,
//! with ample and with scarce demand.
//!
//! cargo run --example best_response_dynamics

use poolsim::analysis::{br_dynamics, SearchSettings};
use poolsim::mechanisms::Mechanism;
use poolsim::model::{CostFunction, DemandModel, MinerProfile, PlatformParams, StrategyProfile};

fn main() -> poolsim::Result<()> {
    let params = PlatformParams { productivity: 10.0, ..Default::default() };
    let miners = vec![
        MinerProfile::new(0, 1.0, CostFunction::Linear { rate: 1.0 })?,
        MinerProfile::new(1, 1.0, CostFunction::Linear { rate: 1.0 })?,
    ];
    let settings = SearchSettings { grid_points: 64, replicas: 10_000, seed: 9 };
    for m in [100.0, 2.0] {
        let demand = DemandModel::Constant { value: m };
        let d = br_dynamics(Mechanism::Pps, &params, &miners, &demand, &StrategyProfile::full(&miners), 30, 0.02, &settings)?;
        println!("M = {m}");
        for (i, p) in d.trajectory.iter().enumerate() {
            println!("  step {i:2}: ({:.4}, {:.4})", p[0], p[1]);
        }
        match d.fixed_point {
            Some(ref fp) => println!("  fixed point ({:.4}, {:.4}) after {} steps", fp[0], fp[1], d.iterations()),
            None => println!("  no fixed point within 30 steps"),
        }
    }
    Ok(())
}
