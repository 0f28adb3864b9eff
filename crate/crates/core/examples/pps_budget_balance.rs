//! Simulates pay-per-share with uncertain demand and audits the payout
//! ratio round by round and on average.
//!
//! cargo run --example pps_budget_balance

use poolsim::analysis::{bb_audit, BudgetBounds};
use poolsim::mechanisms::Mechanism;
use poolsim::model::{CostFunction, DemandModel, MinerProfile, PlatformParams};
use poolsim::sim::{run_simulation, Scenario};

fn main() -> poolsim::Result<()> {
    let params = PlatformParams { price: 1.25, base_reward: 1.0, productivity: 2.0, ..Default::default() };
    let miners = vec![
        MinerProfile::new(0, 3.0, CostFunction::Linear { rate: 0.5 })?,
        MinerProfile::new(1, 1.0, CostFunction::Power { scale: 0.4, exponent: 2.0 })?,
        MinerProfile::new(2, 2.0, CostFunction::Linear { rate: 1.5 })?,
    ];
    // Mean demand 12 sits exactly at full-capacity supply, so some rounds bind.
    let demand = DemandModel::Uniform { low: 4.0, high: 20.0 };
    let scenario = Scenario::full_power(params, miners, demand, Mechanism::Pps, 20_000);
    let ledger = run_simulation(&scenario, 42)?;

    let ceiling = params.base_reward / params.price;
    let audit = bb_audit(&ledger, &params, &BudgetBounds { theta: 0.0, gamma: ceiling })?;
    println!("rounds             {}", audit.rounds);
    println!("ratio range        [{:.6}, {:.6}]  (ceiling b/p = {ceiling})", audit.min_ratio, audit.max_ratio);
    println!("mean ratio         {:.6} ± {:.6}", audit.mean_ratio, audit.ci_half_width);
    println!("violations         {}", audit.violations);
    println!("intake / outflow   {:.2} / {:.2}", ledger.cumulative_intake, ledger.cumulative_outflow);
    for i in 0..ledger.miners() {
        println!("miner {i}: mean reward {:.4}, mean payoff {:.4}", ledger.mean_reward(i), ledger.mean_payoff(i));
    }
    Ok(())
}
