//! The repeated game: a strictly sequential round loop in which every
//! miner picks an allocation from its own history, the platform draws
//! demand and difficulties, pays out, and advances the subsidy windows.

mod ledger;
mod policy;

pub use ledger::{RoundRecord, SimulationLedger};
pub use policy::{delta_adaptive_policy, MinerPolicy, Observation};

use crate::analysis::{DemandSource, PayoffProblem, SearchSettings, WindowSource};
use crate::error::{Error, Result};
use crate::mechanisms::{reward, Mechanism, RollingWindow};
use crate::model::{sample_transcript, DemandModel, MinerProfile, PlatformParams, StrategyProfile};
use crate::rng::{Purpose, SeedStreams};

/// Everything needed to run a simulation except the seed.
#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub params: PlatformParams,
    pub miners: Vec<MinerProfile>,
    pub policies: Vec<MinerPolicy>,
    pub demand: DemandModel,
    pub mechanism: Mechanism,
    pub rounds: u64,
}

impl Scenario {
    /// Every miner plays `Static(A_i)`.
    pub fn full_power(
        params: PlatformParams,
        miners: Vec<MinerProfile>,
        demand: DemandModel,
        mechanism: Mechanism,
        rounds: u64,
    ) -> Self {
        let policies = miners
            .iter()
            .map(|m| MinerPolicy::Static { allocation: m.capacity })
            .collect();
        Self { params, miners, policies, demand, mechanism, rounds }
    }

    pub fn validate(&self) -> Result<()> {
        self.params.validate()?;
        self.demand.validate()?;
        if self.rounds == 0 {
            return Err(Error::invalid("rounds", "must be at least 1"));
        }
        if self.miners.is_empty() {
            return Err(Error::invalid("miners", "at least one miner required"));
        }
        if self.policies.len() != self.miners.len() {
            return Err(Error::invalid(
                "miners",
                format!("{} policies for {} miners", self.policies.len(), self.miners.len()),
            ));
        }
        for (i, (m, p)) in self.miners.iter().zip(&self.policies).enumerate() {
            m.validate()?;
            p.validate(&format!("miners[{i}].policy"), m.capacity)?;
        }
        Ok(())
    }
}

/// Mutable state of a running simulation.
#[derive(Debug, Clone)]
pub struct Simulation {
    scenario: Scenario,
    streams: SeedStreams,
    next_round: u64,
    windows: Vec<RollingWindow>,
    observations: Vec<Vec<Observation>>,
    ledger: SimulationLedger,
}

impl Simulation {
    pub fn new(scenario: Scenario, seed: u64) -> Result<Self> {
        scenario.validate()?;
        let n = scenario.miners.len();
        let windows = vec![RollingWindow::new(scenario.params.window); n];
        Ok(Self {
            scenario,
            streams: SeedStreams::new(seed),
            next_round: 1,
            windows,
            observations: vec![Vec::new(); n],
            ledger: SimulationLedger::default(),
        })
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn windows(&self) -> &[RollingWindow] {
        &self.windows
    }

    pub fn ledger(&self) -> &SimulationLedger {
        &self.ledger
    }

    pub fn into_ledger(self) -> SimulationLedger {
        self.ledger
    }

    pub fn is_finished(&self) -> bool {
        self.next_round > self.scenario.rounds
    }

    fn allocation(&self, miner: usize, round: u64) -> Result<f64> {
        let profile = &self.scenario.miners[miner];
        let history = &self.observations[miner];
        let a = match self.scenario.policies[miner] {
            MinerPolicy::Static { allocation } => allocation,
            MinerPolicy::DeltaAdaptive { step, floor } => {
                let previous = history.last().map_or(profile.capacity, |o| o.allocation);
                delta_adaptive_policy(previous, history, profile.capacity, step, floor)
            }
            MinerPolicy::MyopicBr { grid_points, replicas } => {
                let forecast = history
                    .last()
                    .map_or(self.scenario.demand.mean(), |o| o.announced_demand);
                let problem = PayoffProblem {
                    mechanism: self.scenario.mechanism,
                    miner,
                    params: &self.scenario.params,
                    profiles: &self.scenario.miners,
                    demand: DemandSource::Realized(forecast),
                    window: WindowSource::Given(self.windows[miner].clone()),
                };
                let settings = SearchSettings {
                    grid_points,
                    replicas,
                    seed: self.streams.child_seed(Purpose::Policy, round, miner as u64),
                };
                problem
                    .best_response(&StrategyProfile::full(&self.scenario.miners), &settings)?
                    .argmax
            }
        };
        Ok(a.clamp(0.0, profile.capacity))
    }

    /// Plays one round and appends its record.
    pub fn step_round(&mut self) -> Result<&RoundRecord> {
        let round = self.next_round;
        let sc = &self.scenario;
        let demand = match sc.demand {
            DemandModel::Constant { value } => value,
            model => model.sample(&mut self.streams.stream(Purpose::Demand, round, 0, 0)),
        };
        let allocations = (0..sc.miners.len())
            .map(|i| self.allocation(i, round))
            .collect::<Result<Vec<_>>>()?;
        let strategy = StrategyProfile::new(allocations, &sc.miners)?;
        let transcript = sample_transcript(&sc.params, &strategy, demand, round, 0, &self.streams);
        let outcome = reward(sc.mechanism, &transcript, &sc.params, &sc.miners, &self.windows)?;

        let payoffs = sc
            .miners
            .iter()
            .zip(&transcript.allocations)
            .zip(&outcome.rewards)
            .map(|((m, &a), &r)| Ok(r - m.cost.eval(a)?))
            .collect::<Result<Vec<_>>>()?;
        for (i, &d) in transcript.difficulties.iter().enumerate() {
            self.windows[i].push(d);
            self.observations[i].push(Observation {
                round,
                announced_demand: demand,
                allocation: transcript.allocations[i],
                difficulty: d,
                reward: outcome.rewards[i],
                delta: outcome.scale_delta,
            });
        }
        let record = RoundRecord {
            round,
            demand,
            intake: sc.params.price * transcript.served(),
            outflow: outcome.rewards.iter().sum(),
            allocations: transcript.allocations,
            difficulties: transcript.difficulties,
            rewards: outcome.rewards,
            payoffs,
            subsidy_flags: outcome.subsidy_flags,
            delta: outcome.scale_delta,
            budget_ratio: outcome.budget_ratio,
        };
        self.ledger.push(record);
        self.next_round += 1;
        Ok(self.ledger.records.last().expect("just pushed"))
    }

    /// Plays every remaining round.
    pub fn run(mut self) -> Result<SimulationLedger> {
        while !self.is_finished() {
            self.step_round()?;
        }
        Ok(self.ledger)
    }
}

/// Runs `scenario` from round 1 to `scenario.rounds`.
pub fn run_simulation(scenario: &Scenario, seed: u64) -> Result<SimulationLedger> {
    Simulation::new(scenario.clone(), seed)?.run()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analysis::subsidy_prob_lower;
    use crate::model::CostFunction;

    fn miners(n: usize, capacity: f64, rate: f64) -> Vec<MinerProfile> {
        (0..n)
            .map(|i| MinerProfile::new(i, capacity, CostFunction::Linear { rate }).unwrap())
            .collect()
    }

    fn params(k: f64, window: usize) -> PlatformParams {
        PlatformParams { productivity: k, window, ..Default::default() }
    }

    #[test]
    fn idle_round_pays_nothing() {
        let m = miners(3, 1.0, 0.5);
        let sc = Scenario {
            params: params(1.0, 5),
            policies: vec![MinerPolicy::Static { allocation: 0.0 }; 3],
            miners: m,
            demand: DemandModel::Constant { value: 10.0 },
            mechanism: Mechanism::Ppss,
            rounds: 1,
        };
        let ledger = run_simulation(&sc, 1).unwrap();
        let r = &ledger.records[0];
        assert_eq!(r.difficulties, vec![0.0; 3]);
        assert_eq!(r.rewards, vec![0.0; 3]);
        assert_eq!(r.budget_ratio, 0.0);
    }

    #[test]
    fn windows_fill_then_roll() {
        let sc = Scenario::full_power(
            params(1.0, 5),
            miners(2, 1.0, 0.5),
            DemandModel::Constant { value: 10.0 },
            Mechanism::Ppss,
            10,
        );
        let mut sim = Simulation::new(sc, 3).unwrap();
        sim.step_round().unwrap();
        sim.step_round().unwrap();
        assert_eq!(sim.windows()[0].len(), 2);
        sim.step_round().unwrap();
        assert_eq!(sim.windows()[0].len(), 3);
        while sim.windows()[0].len() < 5 {
            sim.step_round().unwrap();
        }
        let last_d = sim.step_round().unwrap().difficulties[0];
        assert_eq!(sim.windows()[0].len(), 5);
        assert_eq!(*sim.windows()[0].iter().last().unwrap(), last_d);
    }

    #[test]
    fn ledger_is_consistent() {
        let sc = Scenario::full_power(
            params(2.0, 5),
            miners(3, 1.5, 0.5),
            DemandModel::Uniform { low: 2.0, high: 12.0 },
            Mechanism::Pps,
            500,
        );
        let ledger = run_simulation(&sc, 11).unwrap();
        assert_eq!(ledger.len(), 500);
        assert!(ledger.records.windows(2).all(|w| w[0].round < w[1].round));
        let outflow: f64 = ledger.records.iter().map(|r| r.outflow).sum();
        let intake: f64 = ledger.records.iter().map(|r| r.intake).sum();
        assert!((ledger.cumulative_outflow - outflow).abs() <= 1e-12 * outflow);
        assert!((ledger.cumulative_intake - intake).abs() <= 1e-12 * intake);
        for r in &ledger.records {
            let total: f64 = r.difficulties.iter().sum();
            if total > 0.0 {
                assert!((r.delta - total.min(r.demand) / total).abs() < 1e-15);
            }
            assert!((r.outflow - r.rewards.iter().sum::<f64>()).abs() < 1e-12);
            assert!(r.budget_ratio <= 1.0 + 1e-12);
        }
    }

    #[test]
    fn replay_is_identical() {
        let sc = Scenario::full_power(
            params(2.0, 4),
            miners(3, 1.0, 1.5),
            DemandModel::LogNormal { mu: 1.5, sigma: 0.4 },
            Mechanism::Ppss,
            300,
        );
        assert_eq!(run_simulation(&sc, 8).unwrap(), run_simulation(&sc, 8).unwrap());
        assert_ne!(run_simulation(&sc, 8).unwrap(), run_simulation(&sc, 9).unwrap());
    }

    #[test]
    fn pps_ratio_tracks_supply_over_demand() {
        // With M ≥ k·ΣA the demand never binds, so E[ratio] = k·ΣA·b/(M·p).
        let m = 40.0;
        let sc = Scenario::full_power(
            params(2.0, 5),
            miners(4, 2.5, 0.5),
            DemandModel::Constant { value: m },
            Mechanism::Pps,
            10_000,
        );
        let ledger = run_simulation(&sc, 5).unwrap();
        let expected = 2.0 * 10.0 / m;
        let got = ledger.mean_budget_ratio();
        assert!((got - expected).abs() < 0.01 * expected, "{got} vs {expected}");
    }

    #[test]
    fn mean_difficulty_matches_productivity() {
        let sc = Scenario::full_power(
            params(3.0, 5),
            miners(2, 2.0, 0.5),
            DemandModel::Constant { value: 100.0 },
            Mechanism::Pps,
            5_000,
        );
        let ledger = run_simulation(&sc, 21).unwrap();
        for i in 0..2 {
            let ds: Vec<f64> = ledger.records.iter().map(|r| r.difficulties[i]).collect();
            let n = ds.len() as f64;
            let mean = ds.iter().sum::<f64>() / n;
            // Var[Gamma(6, 1)] = 6
            let se = (6.0 / n).sqrt();
            assert!((mean - 6.0).abs() < 5.0 * se, "{mean}");
        }
    }

    #[test]
    fn subsidy_frequency_beats_lower_bound() {
        let sc = Scenario::full_power(
            params(100.0, 5),
            miners(1, 1.0, 150.0),
            DemandModel::Constant { value: 300.0 },
            Mechanism::Ppss,
            10_000,
        );
        let ledger = run_simulation(&sc, 2).unwrap();
        let bound = subsidy_prob_lower(1.0, 1.0, 0.8).unwrap();
        assert!(ledger.subsidy_frequency(0) >= bound);
    }

    #[test]
    fn rejects_bad_scenarios() {
        let mut sc = Scenario::full_power(
            params(1.0, 5),
            miners(2, 1.0, 0.5),
            DemandModel::Constant { value: 10.0 },
            Mechanism::Pps,
            0,
        );
        assert!(matches!(Simulation::new(sc.clone(), 0), Err(Error::InvalidParam { ref field, .. }) if field == "rounds"));
        sc.rounds = 1;
        sc.policies[1] = MinerPolicy::Static { allocation: 2.0 };
        let err = Simulation::new(sc.clone(), 0).unwrap_err();
        assert!(err.to_string().contains("miners[1].policy.allocation"), "{err}");
        sc.policies.pop();
        assert!(Simulation::new(sc, 0).is_err());
    }
}
