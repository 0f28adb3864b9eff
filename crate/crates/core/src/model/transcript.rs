use rand::Rng;
use rand_distr::{Distribution, Gamma};

use super::{MinerProfile, PlatformParams};
use crate::error::{Error, Result};
use crate::rng::{Purpose, SeedStreams};

/// One allocation `a_i` per miner, each within `[0, A_i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct StrategyProfile(Vec<f64>);

impl StrategyProfile {
    pub fn new(allocations: Vec<f64>, profiles: &[MinerProfile]) -> Result<Self> {
        if allocations.len() != profiles.len() {
            return Err(Error::Precondition(format!(
                "{} allocations for {} miners",
                allocations.len(),
                profiles.len()
            )));
        }
        for (i, (&a, p)) in allocations.iter().zip(profiles).enumerate() {
            if !(a >= 0.0 && a <= p.capacity) {
                return Err(Error::invalid(
                    format!("allocations[{i}]"),
                    format!("must lie in [0, {}], got {a}", p.capacity),
                ));
            }
        }
        Ok(Self(allocations))
    }

    /// Every miner at full capacity.
    pub fn full(profiles: &[MinerProfile]) -> Self {
        Self(profiles.iter().map(|p| p.capacity).collect())
    }

    pub fn idle(n: usize) -> Self {
        Self(vec![0.0; n])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn total(&self) -> f64 {
        self.0.iter().sum()
    }

    /// Copy of this profile with miner `i` moved to `a`.
    pub fn with(&self, i: usize, a: f64) -> Self {
        let mut v = self.0.clone();
        v[i] = a;
        Self(v)
    }
}

/// One round's demand, allocations and reported difficulties.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundTranscript {
    pub round: u64,
    pub demand: f64,
    pub allocations: Vec<f64>,
    pub difficulties: Vec<f64>,
    /// `|D| = Σ D_i`
    pub total: f64,
}

impl RoundTranscript {
    pub fn new(round: u64, demand: f64, allocations: Vec<f64>, difficulties: Vec<f64>) -> Self {
        let total = difficulties.iter().sum();
        Self {
            round,
            demand,
            allocations,
            difficulties,
            total,
        }
    }

    /// `min{|D|, M}`: the completed difficulty the platform pays for.
    pub fn served(&self) -> f64 {
        self.total.min(self.demand)
    }
}

/// One `Gamma(shape, 1)` draw. Shape 0 is the point mass at 0.
pub fn gamma_sample<R: Rng + ?Sized>(shape: f64, rng: &mut R) -> Result<f64> {
    if !(shape >= 0.0 && shape.is_finite()) {
        return Err(Error::Domain { what: "gamma shape", value: shape });
    }
    if shape == 0.0 {
        return Ok(0.0);
    }
    let dist = Gamma::new(shape, 1.0).map_err(|_| Error::Domain { what: "gamma shape", value: shape })?;
    Ok(dist.sample(rng))
}

/// Samples `D_i ~ Gamma(k·a_i, 1)` independently for every miner, each from
/// its own `(round, miner, replica)` substream.
pub fn sample_transcript(
    params: &PlatformParams,
    strategy: &StrategyProfile,
    demand: f64,
    round: u64,
    replica: u64,
    streams: &SeedStreams,
) -> RoundTranscript {
    let difficulties = strategy
        .as_slice()
        .iter()
        .enumerate()
        .map(|(i, &a)| {
            let mut rng = streams.stream(Purpose::Difficulty, round, i as u64, replica);
            gamma_sample(params.productivity * a, &mut rng).expect("allocations are non-negative")
        })
        .collect();
    RoundTranscript::new(round, demand, strategy.as_slice().to_vec(), difficulties)
}
