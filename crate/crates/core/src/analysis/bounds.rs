use super::estimate::monte_carlo;
use crate::error::{Error, Result};
use crate::mechanisms::subsidy_shape;
use crate::model::{gamma_sample, CostFunction, MinerProfile, PlatformParams};
use crate::rng::Purpose;

/// Two upper bounds on the lower tail `P(X ≤ t)` of `X ~ Gamma(s, 1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ChernoffBound {
    /// `exp(s·ln(t/s) + s − t) = (u·e^(1−u))^s` with `u = t/s`.
    pub standard: f64,
    /// `u·e^(1−u)`: the standard bound with the exponent `s` dropped.
    /// Valid whenever `s ≥ 1`, because the base is at most 1.
    pub relaxed: f64,
}

pub fn chernoff_tail_upper(shape: f64, threshold: f64) -> Result<ChernoffBound> {
    if !(shape > 0.0 && shape.is_finite()) {
        return Err(Error::Domain { what: "gamma shape", value: shape });
    }
    if !(threshold > 0.0 && threshold < shape) {
        return Err(Error::Domain { what: "tail threshold (needs 0 < t < s)", value: threshold });
    }
    let u = threshold / shape;
    Ok(ChernoffBound {
        standard: (shape * u.ln() + shape - threshold).exp(),
        relaxed: u * (1.0 - u).exp(),
    })
}

/// Lower bound `max(0, 1 − u·e^(1−u))`, `u = λA/a`, on the probability
/// that a miner at allocation `a` earns the subsidy. It equals the subsidy
/// shape evaluated at the mean difficulty `a·k`.
///
/// The bound comes from the Chernoff tail and only holds for `a ≥ λA`.
/// Below that the true probability tends to 0 as the window grows, while
/// this expression stays positive.
pub fn subsidy_prob_lower(a: f64, capacity: f64, lambda: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(Error::Domain { what: "allocation", value: a });
    }
    let u = lambda * capacity / a;
    Ok((1.0 - u * (1.0 - u).exp()).max(0.0))
}

/// `a·c̃ − C(a)`
pub fn floor_payoff(a: f64, c_tilde: f64, cost: &CostFunction) -> Result<f64> {
    Ok(a * c_tilde - cost.eval(a)?)
}

/// Subsidy mass `g(D) = (c̃/k − b)·D / max(K(D), eps_k)`.
pub fn g_function(difficulty: f64, profile: &MinerProfile, params: &PlatformParams) -> Result<f64> {
    let shape = subsidy_shape(difficulty, profile, params)?;
    let numerator = profile.c_tilde() / params.productivity - params.base_reward;
    Ok(numerator * difficulty / shape.max(params.eps_k))
}

/// Empirical comparison of `E[g(D)]` with `g(E[D])` for `D ~ Gamma(k·a, 1)`
/// conditioned on an interval where `g` is convex.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct JensenCheck {
    pub mean_of_g: f64,
    pub g_of_mean: f64,
    pub ci_half_width: f64,
    /// Fraction of draws that fell inside the interval.
    pub coverage: f64,
}

impl JensenCheck {
    pub fn holds(&self) -> bool {
        self.mean_of_g + self.ci_half_width >= self.g_of_mean
    }
}

pub fn jensen_check(
    profile: &MinerProfile,
    params: &PlatformParams,
    a: f64,
    region: (f64, f64),
    replicas: u64,
    seed: u64,
) -> Result<JensenCheck> {
    let (lo, hi) = region;
    if !(lo > 0.0 && hi > lo) {
        return Err(Error::Precondition(format!("bad region [{lo}, {hi}]")));
    }
    let shape = params.productivity * a;
    let sample = |streams: &crate::rng::SeedStreams, r: u64| {
        let mut rng = streams.stream(Purpose::Difficulty, 0, 0, r);
        gamma_sample(shape, &mut rng).expect("non-negative shape")
    };
    // Inside-region indicator, D·indicator and g(D)·indicator share streams.
    let coverage = monte_carlo(replicas, seed, |s, r| {
        let d = sample(s, r);
        f64::from(u8::from(d >= lo && d <= hi))
    });
    if coverage.mean == 0.0 {
        return Err(Error::Precondition("no draws fell inside the region".into()));
    }
    let d_in = monte_carlo(replicas, seed, |s, r| {
        let d = sample(s, r);
        if d >= lo && d <= hi { d } else { 0.0 }
    });
    let g_in = monte_carlo(replicas, seed, |s, r| {
        let d = sample(s, r);
        if d >= lo && d <= hi {
            g_function(d, profile, params).expect("positive difficulty")
        } else {
            0.0
        }
    });
    let mean_d = d_in.mean / coverage.mean;
    Ok(JensenCheck {
        mean_of_g: g_in.mean / coverage.mean,
        g_of_mean: g_function(mean_d, profile, params)?,
        ci_half_width: g_in.ci_half_width / coverage.mean,
        coverage: coverage.mean,
    })
}
