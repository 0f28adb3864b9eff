use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use poolsim::analysis::with_workers;
use poolsim::experiments::{
    argmax_line, cmd_best_response, cmd_fig1, cmd_simulate, cmd_sweep, cmd_verify, ExperimentConfig, SweepAxis,
    Theorem, WORKERS_ENV,
};
use poolsim::{Error, Result};

/// Exit status when a theorem audit reports an unexpected FAIL.
const AUDIT_FAILED: u8 = 3;

#[derive(Parser)]
#[command(name = "poolsim", version, about = "Pay-per-share mechanism simulator")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Common {
    #[arg(long)]
    config: PathBuf,
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Overrides the config replica count.
    #[arg(long)]
    replicas: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    Simulate(Common),
    Verify {
        #[command(flatten)]
        common: Common,
        /// Comma-separated subset of T1..T7.
        #[arg(long, value_delimiter = ',')]
        theorems: Vec<Theorem>,
    },
    BestResponse {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0)]
        miner: usize,
    },
    Sweep {
        #[command(flatten)]
        common: Common,
        /// `path=start:end:steps`, at most twice.
        #[arg(long = "axis")]
        axes: Vec<SweepAxis>,
    },
    Fig1 {
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn load(common: &Common) -> Result<ExperimentConfig> {
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(seed) = common.seed {
        config.seed = seed;
    }
    if let Some(replicas) = common.replicas {
        config.replicas = replicas;
    }
    config.validate()?;
    for w in config.warnings() {
        eprintln!("warning: {w}");
    }
    Ok(config)
}

fn run(command: Command) -> Result<u8> {
    match command {
        Command::Simulate(common) => {
            cmd_simulate(&load(&common)?, &common.out)?;
        }
        Command::Verify { common, theorems } => {
            let report = cmd_verify(&load(&common)?, &common.out, &theorems)?;
            for row in &report.rows {
                println!("{} {} {}", row.theorem, row.verdict, row.claim);
            }
            if report.failures() > 0 {
                return Ok(AUDIT_FAILED);
            }
        }
        Command::BestResponse { common, miner } => {
            let br = cmd_best_response(&load(&common)?, miner, &common.out)?;
            println!("{}", argmax_line(&br));
        }
        Command::Sweep { common, axes } => {
            cmd_sweep(&load(&common)?, &axes, &common.out)?;
        }
        Command::Fig1 { out } => {
            cmd_fig1(&out)?;
        }
    }
    Ok(0)
}

fn workers() -> Result<Option<usize>> {
    match std::env::var(WORKERS_ENV) {
        Err(_) => Ok(None),
        Ok(v) => v
            .parse::<usize>()
            .ok()
            .filter(|&n| n > 0)
            .map(Some)
            .ok_or_else(|| Error::ConfigParse(format!("{WORKERS_ENV} must be a positive integer, got `{v}`"))),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = workers().and_then(|w| match w {
        Some(n) => with_workers(n, || run(cli.command)),
        None => run(cli.command),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
