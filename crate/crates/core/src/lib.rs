//! Simulator for pay-per-share reward mechanisms on a computing platform
//! whose miners weigh platform rewards against an opportunity cost.
//!
//! * [`model`]: platform parameters, miner costs, demand, Gamma difficulty.
//! * [`mechanisms`]: PPS and PPSS reward rules.
//! * [`analysis`]: Monte Carlo payoffs, best responses, IC checks, budget
//!   audits and tail bounds.
//! * [`sim`]: the repeated game with static, myopic and δ-adaptive miners.
//! * [`experiments`]: TOML configs, the experiment commands and CSV/SVG
//!   output behind the `poolsim` binary.
//!
//! The `examples/` directory has one runnable program per capability.

pub mod analysis;
pub mod error;
pub mod experiments;
pub mod mechanisms;
pub mod model;
pub mod rng;
pub mod sim;

pub use error::{Error, Result};
