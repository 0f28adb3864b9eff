//! The PPSS subsidy shape `K` and the per-unit subsidy it scales.
//!
//! Prints `K` across capacities at a fixed difficulty and writes the
//! `fig1.csv` / `fig1.svg` pair into the directory given as the first
//! argument (default: the current directory).
//!
//! cargo run --example subsidy_shape -- out/

use std::path::PathBuf;

use poolsim::experiments::{cmd_fig1, fig1_series};
use poolsim::mechanisms::{subsidy_factor, subsidy_shape};
use poolsim::model::{CostFunction, MinerProfile, PlatformParams};

fn main() -> poolsim::Result<()> {
    let out = std::env::args().nth(1).map_or_else(|| PathBuf::from("."), PathBuf::from);

    let series = fig1_series()?;
    for &(a, k) in series.iter().step_by(50) {
        println!("A = {a:5.1}  K = {k:.6}");
    }
    for path in cmd_fig1(&out)? {
        println!("wrote {}", path.display());
    }

    // Around the threshold λ·A·k the subsidy explodes, capped by eps_k.
    let params = PlatformParams { productivity: 100.0, lambda: 0.8, ..Default::default() };
    let miner = MinerProfile::new(0, 1.0, CostFunction::Linear { rate: 150.0 })?;
    println!("\n     D        K      subsidy/unit");
    for d in [60.0, 75.0, 80.0, 85.0, 90.0, 100.0, 150.0, 300.0] {
        println!(
            "{d:6.1}  {:9.6}  {:12.4}",
            subsidy_shape(d, &miner, &params)?,
            subsidy_factor(d, &miner, &params)?
        );
    }
    Ok(())
}
