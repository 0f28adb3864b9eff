//! Audits the subsidy mechanism's claims on one economy and prints the
//! report rows.
//!
//! cargo run --example theorem_audit

use poolsim::experiments::{verify, ExperimentConfig};

const CONFIG: &str = r#"
seed = 6
rounds = 10000
replicas = 10000
mechanism = "ppss"

[platform]
price = 1.0
base_reward = 1.0
productivity = 100.0
lambda = 0.8
window = 5

[demand]
family = "constant"
value = 300.0

[[miners]]
capacity = 1.0
cost = { family = "linear", rate = 150.0 }
"#;

fn main() -> poolsim::Result<()> {
    let config = ExperimentConfig::from_toml(CONFIG)?;
    let report = verify(&config, &[])?;
    println!("config {}", &report.config_digest[..16]);
    for r in &report.rows {
        println!("{} {:17} metric {:12.5} bound {:12.5} ci {:9.5}  {}", r.theorem, r.verdict, r.metric, r.bound, r.ci, r.claim);
    }
    Ok(())
}
