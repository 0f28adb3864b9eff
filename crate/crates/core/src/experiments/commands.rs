use std::path::{Path, PathBuf};

use super::config::ExperimentConfig;
use super::fig1::{fig1_series, line_plot_svg};
use super::output::{fmt_f64, write_atomic, Table};
use super::verify::{verify, Theorem, VerifyReport};
use crate::analysis::{bb_audit, ocdic_check, BestResponseResult, DemandSource, PayoffProblem, Verdict, WindowSource};
use crate::error::{Error, Result};
use crate::model::StrategyProfile;
use crate::sim::{run_simulation, SimulationLedger};

/// Column names of `ledger.csv` for `miners` miners.
pub fn ledger_header(miners: usize) -> Vec<String> {
    let mut h = vec!["round".to_string(), "M".to_string()];
    for i in 0..miners {
        h.extend([format!("a_{i}"), format!("D_{i}"), format!("reward_{i}"), format!("subsidy_flag_{i}")]);
    }
    h.extend(["delta".to_string(), "budget_ratio".to_string()]);
    h
}

pub fn ledger_csv(ledger: &SimulationLedger) -> Result<Vec<u8>> {
    let mut t = Table::new(&ledger_header(ledger.miners()))?;
    for r in &ledger.records {
        let mut row = vec![r.round.to_string(), fmt_f64(r.demand)];
        for i in 0..r.allocations.len() {
            row.extend([
                fmt_f64(r.allocations[i]),
                fmt_f64(r.difficulties[i]),
                fmt_f64(r.rewards[i]),
                u8::from(r.subsidy_flags[i]).to_string(),
            ]);
        }
        row.extend([fmt_f64(r.delta), fmt_f64(r.budget_ratio)]);
        t.row(row)?;
    }
    t.into_bytes()
}

pub fn summary_csv(config: &ExperimentConfig, ledger: &SimulationLedger) -> Result<Vec<u8>> {
    let audit = bb_audit(ledger, &config.platform, &config.audit)?;
    let mut t = Table::new(&["metric", "value"])?;
    let mut put = |k: String, v: String| t.row([k, v]);
    put("rounds".into(), ledger.len().to_string())?;
    put("mean_budget_ratio".into(), fmt_f64(audit.mean_ratio))?;
    put("budget_ratio_ci".into(), fmt_f64(audit.ci_half_width))?;
    put("min_budget_ratio".into(), fmt_f64(audit.min_ratio))?;
    put("max_budget_ratio".into(), fmt_f64(audit.max_ratio))?;
    put("per_round_bb".into(), pass_fail(audit.per_round_pass))?;
    put("long_term_bb".into(), pass_fail(audit.long_term_pass))?;
    put("cumulative_intake".into(), fmt_f64(ledger.cumulative_intake))?;
    put("cumulative_outflow".into(), fmt_f64(ledger.cumulative_outflow))?;
    for i in 0..ledger.miners() {
        put(format!("mean_allocation_{i}"), fmt_f64(ledger.mean_allocation(i)))?;
        put(format!("mean_payoff_{i}"), fmt_f64(ledger.mean_payoff(i)))?;
        put(format!("subsidy_frequency_{i}"), fmt_f64(ledger.subsidy_frequency(i)))?;
    }
    put("subsidy_frequency".into(), fmt_f64(ledger.overall_subsidy_frequency()))?;
    t.into_bytes()
}

fn pass_fail(ok: bool) -> String {
    if ok { Verdict::Pass } else { Verdict::Fail }.to_string()
}

/// Runs the configured simulation and writes `ledger.csv` and
/// `summary.csv` into `out_dir`.
pub fn cmd_simulate(config: &ExperimentConfig, out_dir: &Path) -> Result<SimulationLedger> {
    let ledger = run_simulation(&config.scenario(), config.seed)?;
    write_atomic(out_dir, "ledger.csv", &ledger_csv(&ledger)?)?;
    write_atomic(out_dir, "summary.csv", &summary_csv(config, &ledger)?)?;
    Ok(ledger)
}

pub fn report_csv(report: &VerifyReport) -> Result<Vec<u8>> {
    let mut t = Table::new(&["theorem", "claim", "config_digest", "verdict", "metric", "bound", "ci"])?;
    for r in &report.rows {
        t.row([
            r.theorem.to_string(),
            r.claim.clone(),
            report.config_digest.clone(),
            r.verdict.to_string(),
            fmt_f64(r.metric),
            fmt_f64(r.bound),
            fmt_f64(r.ci),
        ])?;
    }
    t.into_bytes()
}

/// Audits `theorems` and writes `theorem_report.csv`.
pub fn cmd_verify(config: &ExperimentConfig, out_dir: &Path, theorems: &[Theorem]) -> Result<VerifyReport> {
    let report = verify(config, theorems)?;
    write_atomic(out_dir, "theorem_report.csv", &report_csv(&report)?)?;
    Ok(report)
}

/// Best response of `miner` with everyone else at capacity and demand
/// drawn from the configured model.
pub fn best_response_for(config: &ExperimentConfig, miner: usize) -> Result<BestResponseResult> {
    if miner >= config.miners.len() {
        return Err(Error::invalid(
            "miner",
            format!("index {miner} out of range for {} miners", config.miners.len()),
        ));
    }
    let profiles = config.profiles();
    let problem = PayoffProblem {
        mechanism: config.mechanism,
        miner,
        params: &config.platform,
        profiles: &profiles,
        demand: DemandSource::Model(config.demand),
        window: WindowSource::Warm,
    };
    problem.best_response(&StrategyProfile::full(&profiles), &config.search())
}

/// Writes `br_curve.csv` (a, payoff_mean, ci) and returns the result.
pub fn cmd_best_response(config: &ExperimentConfig, miner: usize, out_dir: &Path) -> Result<BestResponseResult> {
    let br = best_response_for(config, miner)?;
    let mut t = Table::new(&["a", "payoff_mean", "ci"])?;
    for p in &br.curve {
        t.row([fmt_f64(p.a), fmt_f64(p.payoff), fmt_f64(p.ci)])?;
    }
    t.write(out_dir, "br_curve.csv")?;
    Ok(br)
}

pub fn argmax_line(br: &BestResponseResult) -> String {
    format!(
        "argmax={} value={} grid_resolution={} method={}",
        fmt_f64(br.argmax),
        fmt_f64(br.value),
        fmt_f64(br.grid_resolution),
        br.method
    )
}

/// One swept numeric field: `path=start:end:steps`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepAxis {
    pub path: String,
    pub start: f64,
    pub end: f64,
    pub steps: usize,
}

impl SweepAxis {
    pub fn values(&self) -> Vec<f64> {
        if self.steps == 1 {
            return vec![self.start];
        }
        (0..self.steps)
            .map(|i| self.start + (self.end - self.start) * i as f64 / (self.steps - 1) as f64)
            .collect()
    }
}

impl std::str::FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::invalid("axis", format!("expected path=start:end:steps, got `{s}`"));
        let (path, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [start, end, steps] = parts[..] else {
            return Err(bad());
        };
        let axis = SweepAxis {
            path: path.trim().to_string(),
            start: start.trim().parse().map_err(|_| bad())?,
            end: end.trim().parse().map_err(|_| bad())?,
            steps: steps.trim().parse().map_err(|_| bad())?,
        };
        if axis.path.is_empty() || axis.steps == 0 || !axis.start.is_finite() || !axis.end.is_finite() {
            return Err(bad());
        }
        Ok(axis)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub values: Vec<f64>,
    pub verdicts: Vec<Verdict>,
    pub argmax: Vec<f64>,
    pub mean_budget_ratio: f64,
    pub subsidy_frequency: f64,
}

/// Evaluates every cell of the grid spanned by one or two axes.
pub fn sweep(config: &ExperimentConfig, axes: &[SweepAxis]) -> Result<Vec<SweepRow>> {
    if axes.is_empty() || axes.len() > 2 {
        return Err(Error::invalid("axis", format!("need one or two axes, got {}", axes.len())));
    }
    let mut cells: Vec<Vec<f64>> = vec![Vec::new()];
    for axis in axes {
        config.with_field(&axis.path, axis.start)?;
        cells = cells
            .iter()
            .flat_map(|prefix| {
                axis.values().into_iter().map(move |v| {
                    let mut c = prefix.clone();
                    c.push(v);
                    c
                })
            })
            .collect();
    }
    cells
        .into_iter()
        .map(|values| {
            let mut c = config.clone();
            for (axis, &v) in axes.iter().zip(&values) {
                c = c.with_field(&axis.path, v)?;
            }
            let report = ocdic_check(c.mechanism, &c.platform, &c.profiles(), &c.demand, &c.search(), None)?;
            let ledger = run_simulation(&c.scenario(), c.seed)?;
            Ok(SweepRow {
                verdicts: report
                    .miners
                    .iter()
                    .map(|m| {
                        let ok = (m.response.argmax - m.target).abs() <= c.tolerance(m.miner);
                        if ok { Verdict::Pass } else { Verdict::Fail }
                    })
                    .collect(),
                argmax: report.miners.iter().map(|m| m.response.argmax).collect(),
                values,
                mean_budget_ratio: ledger.mean_budget_ratio(),
                subsidy_frequency: ledger.overall_subsidy_frequency(),
            })
        })
        .collect()
}

/// Writes `sweep.csv`: swept values, per-miner verdict and argmax, mean
/// budget ratio and subsidy frequency.
pub fn cmd_sweep(config: &ExperimentConfig, axes: &[SweepAxis], out_dir: &Path) -> Result<Vec<SweepRow>> {
    let rows = sweep(config, axes)?;
    let n = config.miners.len();
    let mut header: Vec<String> = axes.iter().map(|a| a.path.clone()).collect();
    header.extend((0..n).map(|i| format!("ocdic_{i}")));
    header.extend((0..n).map(|i| format!("argmax_{i}")));
    header.extend(["mean_budget_ratio".to_string(), "subsidy_frequency".to_string()]);
    let mut t = Table::new(&header)?;
    for r in &rows {
        let mut fields: Vec<String> = r.values.iter().map(|&v| fmt_f64(v)).collect();
        fields.extend(r.verdicts.iter().map(ToString::to_string));
        fields.extend(r.argmax.iter().map(|&a| fmt_f64(a)));
        fields.extend([fmt_f64(r.mean_budget_ratio), fmt_f64(r.subsidy_frequency)]);
        t.row(fields)?;
    }
    t.write(out_dir, "sweep.csv")?;
    Ok(rows)
}

/// Writes `fig1.csv` and `fig1.svg`.
pub fn cmd_fig1(out_dir: &Path) -> Result<Vec<PathBuf>> {
    let series = fig1_series()?;
    let mut t = Table::new(&["A", "K"])?;
    for &(a, k) in &series {
        t.row([fmt_f64(a), fmt_f64(k)])?;
    }
    let csv = t.write(out_dir, "fig1.csv")?;
    let svg = write_atomic(out_dir, "fig1.svg", line_plot_svg(&series, "capacity A", "subsidy shape K").as_bytes())?;
    Ok(vec![csv, svg])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_axes() {
        let a: SweepAxis = "platform.lambda=0.1:0.9:5".parse().unwrap();
        assert_eq!(a.path, "platform.lambda");
        assert_eq!(a.values().len(), 5);
        assert!((a.values()[4] - 0.9).abs() < 1e-15);
        assert!("platform.lambda".parse::<SweepAxis>().is_err());
        assert!("x=1:2".parse::<SweepAxis>().is_err());
        assert!("x=1:2:0".parse::<SweepAxis>().is_err());
        assert_eq!("x=3:9:1".parse::<SweepAxis>().unwrap().values(), vec![3.0]);
    }

    #[test]
    fn ledger_header_layout() {
        assert_eq!(
            ledger_header(2),
            [
                "round", "M", "a_0", "D_0", "reward_0", "subsidy_flag_0", "a_1", "D_1", "reward_1",
                "subsidy_flag_1", "delta", "budget_ratio"
            ]
        );
    }
}
