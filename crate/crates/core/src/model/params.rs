use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Constants chosen by the platform.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PlatformParams {
    /// Price `p` collected per unit of demanded difficulty.
    pub price: f64,
    /// Base reward `b` paid per unit of completed difficulty.
    pub base_reward: f64,
    /// Productivity `k`: expected difficulty per power unit.
    pub productivity: f64,
    /// Subsidy threshold fraction `λ` in (0, 1).
    pub lambda: f64,
    /// Window length `N` in rounds.
    pub window: usize,
    /// Floor applied to the subsidy shape before dividing by it.
    #[serde(default = "default_eps_k")]
    pub eps_k: f64,
    /// Clamp negative subsidy factors (`c̃/k < b`) to zero.
    #[serde(default = "default_clamp")]
    pub subsidy_clamp_nonneg: bool,
}

fn default_eps_k() -> f64 {
    1e-3
}

fn default_clamp() -> bool {
    true
}

impl Default for PlatformParams {
    /// `b = p` so that pay-per-share is (0, 1)-budget balanced.
    fn default() -> Self {
        Self {
            price: 1.0,
            base_reward: 1.0,
            productivity: 1.0,
            lambda: 0.8,
            window: 5,
            eps_k: default_eps_k(),
            subsidy_clamp_nonneg: default_clamp(),
        }
    }
}

fn positive(field: &str, v: f64) -> Result<()> {
    if v.is_finite() && v > 0.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must be finite and > 0, got {v}")))
    }
}

fn open_unit(field: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(field, format!("must lie in (0, 1), got {v}")))
    }
}

impl PlatformParams {
    pub fn validate(&self) -> Result<()> {
        positive("platform.price", self.price)?;
        positive("platform.base_reward", self.base_reward)?;
        positive("platform.productivity", self.productivity)?;
        open_unit("platform.lambda", self.lambda)?;
        if self.window == 0 {
            return Err(Error::invalid("platform.window", "must be at least 1"));
        }
        open_unit("platform.eps_k", self.eps_k)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_is_valid_and_balanced() {
        let p = PlatformParams::default();
        p.validate().unwrap();
        assert_eq!(p.base_reward, p.price);
    }

    #[test]
    fn rejects_each_bad_field() {
        let bad = [
            PlatformParams { price: 0.0, ..Default::default() },
            PlatformParams { base_reward: -1.0, ..Default::default() },
            PlatformParams { productivity: f64::NAN, ..Default::default() },
            PlatformParams { lambda: 1.0, ..Default::default() },
            PlatformParams { window: 0, ..Default::default() },
            PlatformParams { eps_k: 0.0, ..Default::default() },
        ];
        let fields = [
            "platform.price",
            "platform.base_reward",
            "platform.productivity",
            "platform.lambda",
            "platform.window",
            "platform.eps_k",
        ];
        for (p, field) in bad.iter().zip(fields) {
            match p.validate() {
                Err(Error::InvalidParam { field: f, .. }) => assert_eq!(f, field),
                other => panic!("expected InvalidParam for {field}, got {other:?}"),
            }
        }
    }
}
