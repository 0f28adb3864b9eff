use super::bounds::floor_payoff;
use super::estimate::PayoffProblem;
use crate::error::{Error, Result};
use crate::model::{MinerProfile, StrategyProfile};

pub const MIN_GRID_POINTS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SearchSettings {
    pub grid_points: usize,
    pub replicas: u64,
    pub seed: u64,
}

impl Default for SearchSettings {
    fn default() -> Self {
        Self {
            grid_points: MIN_GRID_POINTS,
            replicas: 10_000,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SearchMethod {
    ClosedForm,
    GridMc,
}

impl std::fmt::Display for SearchMethod {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            SearchMethod::ClosedForm => "closed_form",
            SearchMethod::GridMc => "grid_mc",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurvePoint {
    pub a: f64,
    pub payoff: f64,
    pub ci: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BestResponseResult {
    pub argmax: f64,
    pub value: f64,
    /// Spacing of the search grid.
    pub grid_resolution: f64,
    pub method: SearchMethod,
    /// Objective on the uniform grid, for diagnostics and plotting.
    pub curve: Vec<CurvePoint>,
}

const GOLDEN: f64 = 0.618_033_988_749_894_8;

/// Maximizes `objective` over `[0, upper]`: uniform grid first, then a
/// golden-section pass on the two cells around the grid maximum. Ties go
/// to the larger allocation.
///
/// `objective` returns `(value, ci_half_width)`.
pub fn maximize<F>(upper: f64, grid_points: usize, objective: F) -> Result<(f64, f64, f64, Vec<CurvePoint>)>
where
    F: Fn(f64) -> Result<(f64, f64)>,
{
    if grid_points < 2 {
        return Err(Error::Precondition("search grid needs at least 2 points".into()));
    }
    let step = upper / (grid_points - 1) as f64;
    let mut curve = Vec::with_capacity(grid_points);
    let mut best = 0;
    for i in 0..grid_points {
        let a = if i + 1 == grid_points { upper } else { step * i as f64 };
        let (payoff, ci) = objective(a)?;
        curve.push(CurvePoint { a, payoff, ci });
        if payoff >= curve[best].payoff {
            best = i;
        }
    }
    let (mut argmax, mut value) = (curve[best].a, curve[best].payoff);

    let lo = curve[best.saturating_sub(1)].a;
    let hi = curve[(best + 1).min(grid_points - 1)].a;
    if hi > lo {
        let (mut x1, mut x2) = (hi - GOLDEN * (hi - lo), lo + GOLDEN * (hi - lo));
        let (mut f1, mut f2) = (objective(x1)?.0, objective(x2)?.0);
        let (mut a, mut b) = (lo, hi);
        while b - a > step * 1e-2 {
            if f1 > f2 {
                b = x2;
                x2 = x1;
                f2 = f1;
                x1 = b - GOLDEN * (b - a);
                f1 = objective(x1)?.0;
            } else {
                a = x1;
                x1 = x2;
                f1 = f2;
                x2 = a + GOLDEN * (b - a);
                f2 = objective(x2)?.0;
            }
        }
        let (x, f) = if f1 > f2 { (x1, f1) } else { (x2, f2) };
        if f > value || (f == value && x > argmax) {
            argmax = x;
            value = f;
        }
    }
    Ok((argmax, value, step, curve))
}

impl PayoffProblem<'_> {
    /// Best response of `self.miner` with the other miners fixed at
    /// `others`. Every candidate allocation reuses the same seed.
    pub fn best_response(&self, others: &StrategyProfile, settings: &SearchSettings) -> Result<BestResponseResult> {
        if settings.grid_points < MIN_GRID_POINTS {
            return Err(Error::Precondition(format!(
                "best response needs at least {MIN_GRID_POINTS} grid points, got {}",
                settings.grid_points
            )));
        }
        if self.miner >= self.profiles.len() {
            return Err(Error::Precondition(format!("miner index {} out of range", self.miner)));
        }
        let upper = self.profiles[self.miner].capacity;
        let (argmax, value, step, curve) = maximize(upper, settings.grid_points, |a| {
            let e = self.estimate(&others.with(self.miner, a), settings.replicas, settings.seed)?;
            Ok((e.mean, e.ci_half_width))
        })?;
        Ok(BestResponseResult {
            argmax,
            value,
            grid_resolution: step,
            method: SearchMethod::GridMc,
            curve,
        })
    }
}

/// Monte Carlo best response of `problem.miner` against `others`.
pub fn best_response(
    problem: &PayoffProblem<'_>,
    others: &StrategyProfile,
    settings: &SearchSettings,
) -> Result<BestResponseResult> {
    problem.best_response(others, settings)
}

/// Maximizes the deterministic lower bound `a·c̃ − C(a)` on the same grid.
pub fn best_response_floor(profile: &MinerProfile, grid_points: usize) -> Result<BestResponseResult> {
    let ct = profile.c_tilde();
    let (argmax, value, step, curve) = maximize(profile.capacity, grid_points, |a| {
        Ok((floor_payoff(a, ct, &profile.cost)?, 0.0))
    })?;
    Ok(BestResponseResult {
        argmax,
        value,
        grid_resolution: step,
        method: SearchMethod::ClosedForm,
        curve,
    })
}
