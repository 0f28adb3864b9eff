//! Monte Carlo estimation with a reduction that does not depend on the
//! number of worker threads.
//!
//! Replicas are cut into fixed batches. Each batch is accumulated
//! sequentially, and batch summaries are merged in batch order, so a
//! given `(seed, replicas)` produces the same bits on any thread pool.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::mechanisms::{pps_miner_reward, ppss_miner_reward, Mechanism, RollingWindow};
use crate::model::{gamma_sample, DemandModel, MinerProfile, PlatformParams, StrategyProfile};
use crate::rng::{Purpose, SeedStreams};

pub const MIN_REPLICAS: u64 = 1_000;
const BATCH: u64 = 512;

/// Streaming mean and variance (Welford), mergeable with Chan's rule.
#[derive(Debug, Clone, Copy, Default)]
struct Moments {
    n: u64,
    mean: f64,
    m2: f64,
}

impl Moments {
    fn push(&mut self, x: f64) {
        self.n += 1;
        let delta = x - self.mean;
        self.mean += delta / self.n as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(self, other: Moments) -> Moments {
        if self.n == 0 {
            return other;
        }
        if other.n == 0 {
            return self;
        }
        let n = self.n + other.n;
        let delta = other.mean - self.mean;
        let (na, nb) = (self.n as f64, other.n as f64);
        Moments {
            n,
            mean: self.mean + delta * nb / n as f64,
            m2: self.m2 + other.m2 + delta * delta * na * nb / n as f64,
        }
    }
}

/// Mean of a Monte Carlo sample with a 95% normal confidence half-width.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct McSummary {
    pub mean: f64,
    pub std_dev: f64,
    pub ci_half_width: f64,
    pub replicas: u64,
}

/// Runs `f(streams, replica)` for every replica in parallel and reduces
/// the results deterministically.
pub fn monte_carlo<F>(replicas: u64, seed: u64, f: F) -> McSummary
where
    F: Fn(&SeedStreams, u64) -> f64 + Sync,
{
    let streams = SeedStreams::new(seed);
    let batches = replicas.div_ceil(BATCH);
    let parts: Vec<Moments> = (0..batches)
        .into_par_iter()
        .map(|b| {
            let mut m = Moments::default();
            for r in b * BATCH..((b + 1) * BATCH).min(replicas) {
                m.push(f(&streams, r));
            }
            m
        })
        .collect();
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    let std_dev = if total.n > 1 {
        (total.m2 / (total.n - 1) as f64).sqrt()
    } else {
        0.0
    };
    McSummary {
        mean: total.mean,
        std_dev,
        ci_half_width: 1.96 * std_dev / (total.n.max(1) as f64).sqrt(),
        replicas: total.n,
    }
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .expect("thread pool construction")
        .install(f)
}

/// Monte Carlo estimate of a miner's expected payoff `E[R_i] − C_i(a_i)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PayoffEstimate {
    pub mean: f64,
    /// `1.96·s/√replicas`
    pub ci_half_width: f64,
    /// Expected reward alone, without the cost term.
    pub reward_mean: f64,
    pub replicas: u64,
    pub seed: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DemandSource {
    /// Draw `M` from the model every replica.
    Model(DemandModel),
    /// Demand already announced for this round.
    Realized(f64),
}

/// Where the evaluated miner's subsidy history comes from under PPSS.
#[derive(Debug, Clone, PartialEq)]
pub enum WindowSource {
    /// Pre-fill `N` rounds at the evaluated allocation, per replica.
    Warm,
    /// A fixed, already observed history.
    Given(RollingWindow),
}

/// One miner's payoff as a function of its own allocation.
#[derive(Debug, Clone)]
pub struct PayoffProblem<'a> {
    pub mechanism: Mechanism,
    pub miner: usize,
    pub params: &'a PlatformParams,
    pub profiles: &'a [MinerProfile],
    pub demand: DemandSource,
    pub window: WindowSource,
}

fn draw(streams: &SeedStreams, purpose: Purpose, miner: usize, replica: u64, shape: f64) -> f64 {
    if shape == 0.0 {
        return 0.0;
    }
    let mut rng = streams.stream(purpose, 0, miner as u64, replica);
    gamma_sample(shape, &mut rng).expect("shape validated non-negative")
}

impl PayoffProblem<'_> {
    /// Reward to `self.miner` in one replica. The same replica index reuses
    /// the same streams for any allocation (common random numbers).
    fn replica_reward(&self, allocations: &[f64], streams: &SeedStreams, replica: u64) -> f64 {
        let k = self.params.productivity;
        let demand = match self.demand {
            DemandSource::Realized(m) => m,
            DemandSource::Model(DemandModel::Constant { value }) => value,
            DemandSource::Model(model) => {
                model.sample(&mut streams.stream(Purpose::Demand, 0, 0, replica))
            }
        };
        let mut total = 0.0;
        let mut own = 0.0;
        for (j, &a) in allocations.iter().enumerate() {
            let d = draw(streams, Purpose::Difficulty, j, replica, k * a);
            total += d;
            if j == self.miner {
                own = d;
            }
        }
        match self.mechanism {
            Mechanism::Pps => pps_miner_reward(own, total, demand, self.params.base_reward),
            Mechanism::Ppss => {
                let profile = &self.profiles[self.miner];
                let warm;
                let window = match &self.window {
                    WindowSource::Given(w) => w,
                    WindowSource::Warm => {
                        let shape = k * allocations[self.miner];
                        let mut w = RollingWindow::new(self.params.window);
                        if shape > 0.0 {
                            let mut rng = streams.stream(Purpose::Warmup, 0, self.miner as u64, replica);
                            for _ in 0..self.params.window {
                                w.push(gamma_sample(shape, &mut rng).expect("non-negative shape"));
                            }
                        } else {
                            for _ in 0..self.params.window {
                                w.push(0.0);
                            }
                        }
                        warm = w;
                        &warm
                    }
                };
                ppss_miner_reward(own, total, demand, self.params, profile, window).0
            }
        }
    }

    fn check(&self, allocations: &[f64], replicas: u64) -> Result<()> {
        if replicas < MIN_REPLICAS {
            return Err(Error::Precondition(format!(
                "at least {MIN_REPLICAS} replicas required, got {replicas}"
            )));
        }
        if self.miner >= self.profiles.len() {
            return Err(Error::Precondition(format!(
                "miner index {} out of range for {} miners",
                self.miner,
                self.profiles.len()
            )));
        }
        if allocations.len() != self.profiles.len() {
            return Err(Error::Precondition("allocation count differs from miner count".into()));
        }
        Ok(())
    }

    /// Estimates the payoff of `strategy` for `self.miner`.
    pub fn estimate(&self, strategy: &StrategyProfile, replicas: u64, seed: u64) -> Result<PayoffEstimate> {
        let allocations = strategy.as_slice();
        self.check(allocations, replicas)?;
        let cost = self.profiles[self.miner].cost.eval(allocations[self.miner])?;
        let summary = monte_carlo(replicas, seed, |streams, r| self.replica_reward(allocations, streams, r));
        Ok(PayoffEstimate {
            mean: summary.mean - cost,
            ci_half_width: summary.ci_half_width,
            reward_mean: summary.mean,
            replicas,
            seed,
        })
    }
}

/// Expected payoff of `miner` under `strategy`, drawing demand from the
/// model. PPSS windows are warmed at the same strategy.
#[allow(clippy::too_many_arguments)]
pub fn expected_payoff_mc(
    mechanism: Mechanism,
    miner: usize,
    strategy: &StrategyProfile,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    demand: &DemandModel,
    replicas: u64,
    seed: u64,
) -> Result<PayoffEstimate> {
    PayoffProblem {
        mechanism,
        miner,
        params,
        profiles,
        demand: DemandSource::Model(*demand),
        window: WindowSource::Warm,
    }
    .estimate(strategy, replicas, seed)
}
