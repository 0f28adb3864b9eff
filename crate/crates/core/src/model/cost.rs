use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Opportunity cost of deploying power on the platform instead of elsewhere.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case", deny_unknown_fields)]
pub enum CostFunction {
    /// `C(a) = rate·a`
    Linear { rate: f64 },
    /// `C(a) = scale·a^exponent`, exponent ≥ 1
    Power { scale: f64, exponent: f64 },
}

fn check_allocation(a: f64) -> Result<()> {
    if a >= 0.0 && a.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain { what: "allocation", value: a })
    }
}

impl CostFunction {
    pub fn eval(&self, a: f64) -> Result<f64> {
        check_allocation(a)?;
        Ok(match *self {
            CostFunction::Linear { rate } => rate * a,
            CostFunction::Power { scale, exponent } => scale * a.powf(exponent),
        })
    }

    /// Marginal cost `C'(a)`.
    pub fn marginal(&self, a: f64) -> Result<f64> {
        check_allocation(a)?;
        Ok(match *self {
            CostFunction::Linear { rate } => rate,
            CostFunction::Power { scale, exponent } => scale * exponent * a.powf(exponent - 1.0),
        })
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        match *self {
            CostFunction::Linear { rate } if !(rate.is_finite() && rate > 0.0) => Err(
                Error::invalid(format!("{field}.rate"), format!("must be finite and > 0, got {rate}")),
            ),
            CostFunction::Power { scale, .. } if !(scale.is_finite() && scale > 0.0) => Err(
                Error::invalid(format!("{field}.scale"), format!("must be finite and > 0, got {scale}")),
            ),
            CostFunction::Power { exponent, .. } if !(exponent.is_finite() && exponent >= 1.0) => {
                Err(Error::invalid(
                    format!("{field}.exponent"),
                    format!("must be finite and >= 1, got {exponent}"),
                ))
            }
            _ => Ok(()),
        }
    }
}

/// The economic identity of one miner.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MinerProfile {
    pub id: usize,
    /// Total capacity `A_i` in power units.
    pub capacity: f64,
    pub cost: CostFunction,
}

impl MinerProfile {
    pub fn new(id: usize, capacity: f64, cost: CostFunction) -> Result<Self> {
        let profile = Self { id, capacity, cost };
        profile.validate()?;
        Ok(profile)
    }

    /// Marginal cost at full capacity, `c̃ = C'(A)`. By convexity this is
    /// the largest marginal cost anywhere on `[0, A]`.
    pub fn c_tilde(&self) -> f64 {
        self.cost
            .marginal(self.capacity)
            .expect("capacity is validated to be non-negative")
    }

    pub fn validate(&self) -> Result<()> {
        let prefix = format!("miners[{}]", self.id);
        if !(self.capacity.is_finite() && self.capacity > 0.0) {
            return Err(Error::invalid(
                format!("{prefix}.capacity"),
                format!("must be finite and > 0, got {}", self.capacity),
            ));
        }
        self.cost.validate(&format!("{prefix}.cost"))?;
        let ct = self.c_tilde();
        if !(ct.is_finite() && ct > 0.0) {
            return Err(Error::invalid(
                format!("{prefix}.cost"),
                format!("marginal cost at capacity must be finite and > 0, got {ct}"),
            ));
        }
        Ok(())
    }
}
