use rand::Rng;
use rand_distr::{Distribution, Gamma, LogNormal, Uniform};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Distribution `F` of per-round demand `M_j` in difficulty units.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum DemandModel {
    Constant { value: f64 },
    Uniform { low: f64, high: f64 },
    /// Gamma with the given shape and rate (mean `shape / rate`).
    Gamma { shape: f64, rate: f64 },
    /// `exp(N(mu, sigma²))`
    LogNormal { mu: f64, sigma: f64 },
}

impl DemandModel {
    /// Analytic mean `μ_F`.
    pub fn mean(&self) -> f64 {
        match *self {
            DemandModel::Constant { value } => value,
            DemandModel::Uniform { low, high } => 0.5 * (low + high),
            DemandModel::Gamma { shape, rate } => shape / rate,
            DemandModel::LogNormal { mu, sigma } => (mu + 0.5 * sigma * sigma).exp(),
        }
    }

    /// Draws one demand value. Always strictly positive.
    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> f64 {
        let m = match *self {
            DemandModel::Constant { value } => value,
            DemandModel::Uniform { low, high } => Uniform::new(low, high)
                .expect("validated uniform bounds")
                .sample(rng),
            DemandModel::Gamma { shape, rate } => Gamma::new(shape, 1.0 / rate)
                .expect("validated gamma parameters")
                .sample(rng),
            DemandModel::LogNormal { mu, sigma } => LogNormal::new(mu, sigma)
                .expect("validated lognormal parameters")
                .sample(rng),
        };
        // A Gamma or log-normal draw can underflow to zero for extreme
        // parameters; demand must stay positive.
        m.max(f64::MIN_POSITIVE)
    }

    pub fn is_constant(&self) -> bool {
        matches!(self, DemandModel::Constant { .. })
    }

    pub fn validate(&self) -> Result<()> {
        let fail = |field: &str, reason: String| Err(Error::invalid(format!("demand.{field}"), reason));
        match *self {
            DemandModel::Constant { value } if !(value.is_finite() && value > 0.0) => {
                fail("value", format!("must be finite and > 0, got {value}"))
            }
            DemandModel::Uniform { low, .. } if !(low.is_finite() && low > 0.0) => {
                fail("low", format!("must be finite and > 0, got {low}"))
            }
            DemandModel::Uniform { low, high } if !(high.is_finite() && high > low) => {
                fail("high", format!("must be finite and > low ({low}), got {high}"))
            }
            DemandModel::Gamma { shape, .. } if !(shape.is_finite() && shape > 0.0) => {
                fail("shape", format!("must be finite and > 0, got {shape}"))
            }
            DemandModel::Gamma { rate, .. } if !(rate.is_finite() && rate > 0.0) => {
                fail("rate", format!("must be finite and > 0, got {rate}"))
            }
            DemandModel::LogNormal { mu, .. } if !mu.is_finite() => {
                fail("mu", format!("must be finite, got {mu}"))
            }
            DemandModel::LogNormal { sigma, .. } if !(sigma.is_finite() && sigma >= 0.0) => {
                fail("sigma", format!("must be finite and >= 0, got {sigma}"))
            }
            _ => Ok(()),
        }
    }
}
