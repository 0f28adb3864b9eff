use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::PlatformParams;
use crate::sim::SimulationLedger;

/// Relative slack for per-round ratio checks. Summing `n` pro-rata shares
/// can overshoot the pool by a few ulps.
pub const RATIO_SLACK: f64 = 1e-12;

/// Admissible range `[θ, γ]` for the payout ratio `ΣR/(M·p)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BudgetBounds {
    pub theta: f64,
    pub gamma: f64,
}

impl Default for BudgetBounds {
    fn default() -> Self {
        Self { theta: 0.0, gamma: 1.0 }
    }
}

impl BudgetBounds {
    pub fn validate(&self) -> Result<()> {
        if !(self.theta.is_finite() && self.gamma.is_finite() && self.theta <= self.gamma) {
            return Err(Error::invalid(
                "audit",
                format!("need finite theta <= gamma, got [{}, {}]", self.theta, self.gamma),
            ));
        }
        Ok(())
    }

    fn contains(&self, ratio: f64) -> bool {
        let slack = RATIO_SLACK * self.gamma.abs().max(1.0);
        ratio >= self.theta - slack && ratio <= self.gamma + slack
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BudgetAudit {
    pub bounds: BudgetBounds,
    pub rounds: usize,
    pub min_ratio: f64,
    pub max_ratio: f64,
    pub mean_ratio: f64,
    pub ci_half_width: f64,
    /// Rounds whose ratio left `[θ, γ]`.
    pub violations: usize,
    pub per_round_pass: bool,
    pub long_term_pass: bool,
    /// `b/p`, the per-round ceiling of pay-per-share.
    pub pps_ceiling: f64,
}

/// Checks every round's ratio and the long-run mean against `bounds`.
pub fn bb_audit(ledger: &SimulationLedger, params: &PlatformParams, bounds: &BudgetBounds) -> Result<BudgetAudit> {
    bounds.validate()?;
    let ratios: Vec<f64> = ledger.records.iter().map(|r| r.budget_ratio).collect();
    if ratios.is_empty() {
        return Err(Error::Precondition("cannot audit an empty ledger".into()));
    }
    let n = ratios.len() as f64;
    let mean = ratios.iter().sum::<f64>() / n;
    let var = if ratios.len() > 1 {
        ratios.iter().map(|r| (r - mean).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let ci = 1.96 * (var / n).sqrt();
    let violations = ratios.iter().filter(|&&r| !bounds.contains(r)).count();
    Ok(BudgetAudit {
        bounds: *bounds,
        rounds: ratios.len(),
        min_ratio: ratios.iter().copied().fold(f64::INFINITY, f64::min),
        max_ratio: ratios.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        mean_ratio: mean,
        ci_half_width: ci,
        violations,
        per_round_pass: violations == 0,
        long_term_pass: bounds.contains(mean),
        pps_ceiling: params.base_reward / params.price,
    })
}
