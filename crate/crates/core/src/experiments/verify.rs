use std::collections::HashMap;
use std::str::FromStr;

use super::config::ExperimentConfig;
use crate::analysis::{
    bb_audit, chernoff_tail_upper, docdic_check, expected_payoff_mc, floor_payoff, jensen_check, monte_carlo,
    ocdic_check, BudgetBounds, IcReport,
};
use crate::error::{Error, Result};
use crate::mechanisms::Mechanism;
use crate::model::{gamma_sample, CostFunction, StrategyProfile};
use crate::rng::Purpose;
use crate::sim::{run_simulation, Simulation, SimulationLedger};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Theorem {
    T1,
    T2,
    T3,
    T4,
    T5,
    T6,
    T7,
}

impl Theorem {
    pub const ALL: [Theorem; 7] = [
        Theorem::T1,
        Theorem::T2,
        Theorem::T3,
        Theorem::T4,
        Theorem::T5,
        Theorem::T6,
        Theorem::T7,
    ];

    /// The mechanism the theorem is about.
    pub fn mechanism(self) -> Mechanism {
        match self {
            Theorem::T1 | Theorem::T2 | Theorem::T3 | Theorem::T4 => Mechanism::Pps,
            Theorem::T5 | Theorem::T6 | Theorem::T7 => Mechanism::Ppss,
        }
    }

    /// Theorems about `mechanism`, in order.
    pub fn defaults_for(mechanism: Mechanism) -> Vec<Theorem> {
        Self::ALL.into_iter().filter(|t| t.mechanism() == mechanism).collect()
    }
}

impl std::fmt::Display for Theorem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "T{}", *self as u8 + 1)
    }
}

impl FromStr for Theorem {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let digits = s.trim().trim_start_matches(['T', 't']);
        match digits.parse::<usize>() {
            Ok(n @ 1..=7) => Ok(Self::ALL[n - 1]),
            _ => Err(Error::invalid("theorems", format!("expected T1..T7, got `{s}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AuditVerdict {
    Pass,
    Fail,
    /// The implementation contradicts the stated claim in a way already
    /// analysed and expected.
    KnownDiscrepancy,
}

impl std::fmt::Display for AuditVerdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            AuditVerdict::Pass => "PASS",
            AuditVerdict::Fail => "FAIL",
            AuditVerdict::KnownDiscrepancy => "KNOWN_DISCREPANCY",
        })
    }
}

/// One line of the theorem report. For argmax rows `ci` holds the
/// acceptance tolerance on the allocation axis.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportRow {
    pub theorem: Theorem,
    pub claim: String,
    pub verdict: AuditVerdict,
    pub metric: f64,
    pub bound: f64,
    pub ci: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct VerifyReport {
    pub config_digest: String,
    pub rows: Vec<ReportRow>,
}

impl VerifyReport {
    pub fn failures(&self) -> usize {
        self.rows.iter().filter(|r| r.verdict == AuditVerdict::Fail).count()
    }

    pub fn rows_for(&self, theorem: Theorem) -> impl Iterator<Item = &ReportRow> {
        self.rows.iter().filter(move |r| r.theorem == theorem)
    }
}

fn pass_if(ok: bool) -> AuditVerdict {
    if ok {
        AuditVerdict::Pass
    } else {
        AuditVerdict::Fail
    }
}

fn known_if_not(ok: bool) -> AuditVerdict {
    if ok {
        AuditVerdict::Pass
    } else {
        AuditVerdict::KnownDiscrepancy
    }
}

struct Auditor<'a> {
    config: &'a ExperimentConfig,
    ledgers: HashMap<Mechanism, SimulationLedger>,
    ocdic: HashMap<Mechanism, IcReport>,
    rows: Vec<ReportRow>,
}

impl<'a> Auditor<'a> {
    fn with_mechanism(&self, mechanism: Mechanism) -> ExperimentConfig {
        ExperimentConfig { mechanism, ..self.config.clone() }
    }

    fn ledger(&mut self, mechanism: Mechanism) -> Result<&SimulationLedger> {
        if !self.ledgers.contains_key(&mechanism) {
            let c = self.with_mechanism(mechanism);
            self.ledgers.insert(mechanism, run_simulation(&c.scenario(), c.seed)?);
        }
        Ok(&self.ledgers[&mechanism])
    }

    fn ocdic(&mut self, mechanism: Mechanism) -> Result<&IcReport> {
        if !self.ocdic.contains_key(&mechanism) {
            let c = self.config;
            let report = ocdic_check(
                mechanism,
                &c.platform,
                &c.profiles(),
                &c.demand,
                &c.search(),
                None,
            )?;
            self.ocdic.insert(mechanism, report);
        }
        Ok(&self.ocdic[&mechanism])
    }

    fn push(&mut self, theorem: Theorem, claim: String, verdict: AuditVerdict, metric: f64, bound: f64, ci: f64) {
        self.rows.push(ReportRow { theorem, claim, verdict, metric, bound, ci });
    }

    fn demand_dominant(&self) -> bool {
        self.config.warnings().is_empty()
    }

    fn t1(&mut self) -> Result<()> {
        let p = self.config.platform;
        let ceiling = p.base_reward / p.price;
        let ledger = self.ledger(Mechanism::Pps)?;
        let audit = bb_audit(ledger, &p, &BudgetBounds { theta: 0.0, gamma: ceiling })?;
        self.push(
            Theorem::T1,
            format!("every per-round PPS payout ratio lies in [0, b/p] ({} rounds)", audit.rounds),
            pass_if(audit.per_round_pass),
            audit.max_ratio,
            ceiling,
            audit.ci_half_width,
        );
        Ok(())
    }

    /// T2 and T3 share one OCD-IC run. T2 covers the
    /// linear-cost miners only.
    fn t2_t3(&mut self, theorem: Theorem) -> Result<()> {
        let c = self.config;
        let bk = c.platform.base_reward * c.platform.productivity;
        let dominant = self.demand_dominant();
        let report = self.ocdic(Mechanism::Pps)?.clone();
        for (i, m) in c.miners.iter().enumerate() {
            let tol = c.tolerance(i);
            let argmax = report.miners[i].response.argmax;
            let row = match (theorem, m.cost) {
                (Theorem::T2, CostFunction::Linear { rate }) => {
                    let target = if rate <= bk { m.capacity } else { 0.0 };
                    let ok = (argmax - target).abs() <= tol;
                    (
                        format!("miner {i}: linear r={rate} vs b·k={bk}, PPS best response is {target}"),
                        ok,
                        target,
                    )
                }
                (Theorem::T2, _) => continue,
                _ => {
                    let ct = m.cost.marginal(m.capacity)?;
                    let at_capacity = (argmax - m.capacity).abs() <= tol;
                    let claim = if ct <= bk {
                        format!("miner {i}: C'(A)={ct} <= b·k={bk}, PPS best response is A")
                    } else {
                        format!("miner {i}: C'(A)={ct} > b·k={bk}, PPS best response is below A")
                    };
                    (claim, at_capacity == (ct <= bk), m.capacity)
                }
            };
            let (mut claim, ok, bound) = row;
            let verdict = if ok {
                AuditVerdict::Pass
            } else if dominant {
                AuditVerdict::Fail
            } else {
                claim.push_str(" (mean demand below full supply)");
                AuditVerdict::KnownDiscrepancy
            };
            self.push(theorem, claim, verdict, argmax, bound, tol);
        }
        Ok(())
    }

    /// Looks for an interior per-round best response at the tightest
    /// simulated round.
    fn t4(&mut self) -> Result<()> {
        let c = self.config;
        let ledger = self.ledger(Mechanism::Pps)?;
        let tight = ledger
            .records
            .iter()
            .min_by(|a, b| a.delta.total_cmp(&b.delta).then(a.demand.total_cmp(&b.demand)))
            .expect("at least one round");
        let (demand, delta) = (tight.demand, tight.delta);
        let report = docdic_check(
            Mechanism::Pps,
            &c.platform,
            &c.profiles(),
            demand,
            &[],
            &c.search(),
            None,
        )?;
        let (i, gap) = report
            .miners
            .iter()
            .map(|m| (m.miner, m.target - m.response.argmax))
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .expect("at least one miner");
        let tol = c.tolerance(i);
        let argmax = report.miners[i].response.argmax;
        self.push(
            Theorem::T4,
            format!("PPS is not DOCD-IC: interior per-round best response at realized M={demand} (δ={delta})"),
            known_if_not(gap > tol),
            argmax,
            c.miners[i].capacity,
            tol,
        );
        Ok(())
    }

    fn t5(&mut self) -> Result<()> {
        let c = self.config;
        let p = &c.platform;
        let profiles = c.profiles();
        let report = self.ocdic(Mechanism::Ppss)?.clone();
        let full = StrategyProfile::full(&profiles);
        for (i, m) in profiles.iter().enumerate() {
            let tol = c.tolerance(i);
            let v = &report.miners[i];
            self.push(
                Theorem::T5,
                format!("miner {i}: floor payoff a·c̃ − C(a) is maximized at A"),
                pass_if((v.response.argmax - m.capacity).abs() <= tol),
                v.response.argmax,
                m.capacity,
                tol,
            );
            let mc = v.expected_payoff_argmax.expect("PPSS reports the expected-payoff argmax");
            self.push(
                Theorem::T5,
                format!("miner {i}: Monte Carlo expected PPSS payoff is maximized at A"),
                known_if_not((mc - m.capacity).abs() <= tol),
                mc,
                m.capacity,
                tol,
            );

            let est = expected_payoff_mc(Mechanism::Ppss, i, &full, p, &profiles, &c.demand, c.replicas, c.seed)?;
            let floor = floor_payoff(m.capacity, m.c_tilde(), &m.cost)?;
            self.push(
                Theorem::T5,
                format!("miner {i}: expected payoff at A is at least the floor payoff"),
                pass_if(est.mean + 3.0 * est.ci_half_width >= floor),
                est.mean,
                floor,
                est.ci_half_width,
            );

            let s = p.productivity * m.capacity;
            let t = p.lambda * s;
            let bound = chernoff_tail_upper(s, t)?;
            let tail = monte_carlo(c.replicas, c.seed, |streams, r| {
                let mut rng = streams.stream(Purpose::Difficulty, 0, i as u64, r);
                f64::from(u8::from(gamma_sample(s, &mut rng).expect("positive shape") <= t))
            });
            self.push(
                Theorem::T5,
                format!("miner {i}: P(D <= λ·k·A) under the Chernoff bound for Gamma({s}, 1)"),
                pass_if(tail.mean - tail.ci_half_width <= bound.standard),
                tail.mean,
                bound.standard,
                tail.ci_half_width,
            );

            if m.c_tilde() / p.productivity > p.base_reward {
                let region = (1.05 * t, 5.0 * s);
                let j = jensen_check(m, p, m.capacity, region, c.replicas, c.seed)?;
                self.push(
                    Theorem::T5,
                    format!("miner {i}: E[g(D)] >= g(E[D]) on D in [{}, {}]", region.0, region.1),
                    pass_if(j.holds()),
                    j.mean_of_g,
                    j.g_of_mean,
                    j.ci_half_width,
                );
            }
        }
        Ok(())
    }

    fn t6(&mut self) -> Result<()> {
        let c = self.config;
        let p = c.platform;
        let mass: f64 = c.profiles().iter().map(|m| m.c_tilde() * m.capacity).sum();
        let ledger = self.ledger(Mechanism::Ppss)?;
        let audit = bb_audit(ledger, &p, &c.audit)?;
        let bound = ledger.records.iter().map(|r| mass / (r.demand * p.price)).sum::<f64>() / ledger.len() as f64;
        let exceeded = audit.mean_ratio - audit.ci_half_width > bound;
        // A paid subsidy rate (c̃/k − b)/K exceeds c̃/k − b since K < 1, so
        // any round with a positive subsidy pays more than c̃/k per unit.
        let profiles = c.profiles();
        let subsidized = ledger.records.iter().any(|r| {
            r.subsidy_flags
                .iter()
                .zip(&profiles)
                .any(|(&f, m)| f && m.c_tilde() / p.productivity > p.base_reward)
        });
        let verdict = match (exceeded, subsidized) {
            (false, _) => AuditVerdict::Pass,
            (true, true) => AuditVerdict::KnownDiscrepancy,
            (true, false) => AuditVerdict::Fail,
        };
        self.push(
            Theorem::T6,
            format!("long-term PPSS payout ratio at most Σc̃A/(M·p) ({} rounds)", audit.rounds),
            verdict,
            audit.mean_ratio,
            bound,
            audit.ci_half_width,
        );
        Ok(())
    }

    /// Warms every window with `N` full-power rounds, then checks the
    /// per-round best response at mean demand.
    fn t7(&mut self) -> Result<()> {
        let c = self.config;
        let mut warm = self.with_mechanism(Mechanism::Ppss).scenario();
        warm.policies = warm
            .miners
            .iter()
            .map(|m| crate::sim::MinerPolicy::Static { allocation: m.capacity })
            .collect();
        warm.rounds = c.platform.window as u64;
        let mut sim = Simulation::new(warm, c.seed)?;
        while !sim.is_finished() {
            sim.step_round()?;
        }
        let demand = c.demand.mean();
        let report = docdic_check(
            Mechanism::Ppss,
            &c.platform,
            &c.profiles(),
            demand,
            sim.windows(),
            &c.search(),
            None,
        )?;
        for v in &report.miners {
            let tol = c.tolerance(v.miner);
            self.push(
                Theorem::T7,
                format!("miner {}: per-round PPSS best response is A with warm windows, M={demand}", v.miner),
                known_if_not((v.response.argmax - v.target).abs() <= tol),
                v.response.argmax,
                v.target,
                tol,
            );
        }
        Ok(())
    }
}

/// Audits `theorems` (all theorems about the configured mechanism when
/// empty) against `config`.
pub fn verify(config: &ExperimentConfig, theorems: &[Theorem]) -> Result<VerifyReport> {
    let mut list = if theorems.is_empty() {
        Theorem::defaults_for(config.mechanism)
    } else {
        theorems.to_vec()
    };
    list.sort();
    list.dedup();
    let mut auditor = Auditor {
        config,
        ledgers: HashMap::new(),
        ocdic: HashMap::new(),
        rows: Vec::new(),
    };
    for t in list {
        match t {
            Theorem::T1 => auditor.t1()?,
            Theorem::T2 | Theorem::T3 => auditor.t2_t3(t)?,
            Theorem::T4 => auditor.t4()?,
            Theorem::T5 => auditor.t5()?,
            Theorem::T6 => auditor.t6()?,
            Theorem::T7 => auditor.t7()?,
        }
    }
    Ok(VerifyReport { config_digest: config.digest(), rows: auditor.rows })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_theorem_names() {
        assert_eq!("T3".parse::<Theorem>().unwrap(), Theorem::T3);
        assert_eq!("t7".parse::<Theorem>().unwrap(), Theorem::T7);
        assert_eq!("1".parse::<Theorem>().unwrap(), Theorem::T1);
        assert!("T8".parse::<Theorem>().is_err());
        assert!("x".parse::<Theorem>().is_err());
        assert_eq!(Theorem::T6.to_string(), "T6");
    }

    #[test]
    fn defaults_follow_mechanism() {
        assert_eq!(Theorem::defaults_for(Mechanism::Pps).len(), 4);
        assert_eq!(Theorem::defaults_for(Mechanism::Ppss), vec![Theorem::T5, Theorem::T6, Theorem::T7]);
    }
}
