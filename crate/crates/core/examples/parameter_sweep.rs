//! Sweeps the marginal cost at capacity through `b·k` and prints where
//! pay-per-share stops being incentive compatible.
//!
//! cargo run --example parameter_sweep

use poolsim::experiments::{sweep, ExperimentConfig, SweepAxis};

const CONFIG: &str = r#"
seed = 5
rounds = 500
replicas = 10000
mechanism = "pps"

[platform]
price = 1.0
base_reward = 1.0
productivity = 2.0
lambda = 0.8
window = 5

[demand]
family = "constant"
value = 6.0

[[miners]]
capacity = 1.0
cost = { family = "power", scale = 1.0, exponent = 2.0 }
"#;

fn main() -> poolsim::Result<()> {
    let config = ExperimentConfig::from_toml(CONFIG)?;
    let axis: SweepAxis = "miners.0.cost.scale=0.5:1.5:11".parse()?;
    println!("scale  C'(A)/bk  verdict  argmax  mean ratio");
    for row in sweep(&config, &[axis])? {
        let scale = row.values[0];
        println!(
            "{scale:5.2}  {:8.2}  {:7}  {:6.3}  {:.4}",
            scale,
            row.verdicts[0].to_string(),
            row.argmax[0],
            row.mean_budget_ratio
        );
    }
    Ok(())
}
