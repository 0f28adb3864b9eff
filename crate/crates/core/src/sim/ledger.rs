/// Everything recorded about one round.
#[derive(Debug, Clone, PartialEq)]
pub struct RoundRecord {
    pub round: u64,
    pub demand: f64,
    pub allocations: Vec<f64>,
    pub difficulties: Vec<f64>,
    pub rewards: Vec<f64>,
    /// `R_i − C_i(a_i)`
    pub payoffs: Vec<f64>,
    pub subsidy_flags: Vec<bool>,
    pub delta: f64,
    pub budget_ratio: f64,
    /// Platform income `p·min{|D|, M}`.
    pub intake: f64,
    /// `Σ R_i`
    pub outflow: f64,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct SimulationLedger {
    pub records: Vec<RoundRecord>,
    pub cumulative_intake: f64,
    pub cumulative_outflow: f64,
}

impl SimulationLedger {
    pub fn push(&mut self, record: RoundRecord) {
        debug_assert!(self.records.last().is_none_or(|r| r.round < record.round));
        self.cumulative_intake += record.intake;
        self.cumulative_outflow += record.outflow;
        self.records.push(record);
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn miners(&self) -> usize {
        self.records.first().map_or(0, |r| r.allocations.len())
    }

    pub fn mean_budget_ratio(&self) -> f64 {
        mean(self.records.iter().map(|r| r.budget_ratio))
    }

    pub fn mean_payoff(&self, miner: usize) -> f64 {
        mean(self.records.iter().map(|r| r.payoffs[miner]))
    }

    pub fn mean_reward(&self, miner: usize) -> f64 {
        mean(self.records.iter().map(|r| r.rewards[miner]))
    }

    pub fn mean_allocation(&self, miner: usize) -> f64 {
        mean(self.records.iter().map(|r| r.allocations[miner]))
    }

    /// Fraction of rounds in which `miner`'s subsidy indicator was on.
    pub fn subsidy_frequency(&self, miner: usize) -> f64 {
        mean(self.records.iter().map(|r| f64::from(u8::from(r.subsidy_flags[miner]))))
    }

    /// Fraction of all miner-rounds with the subsidy indicator on.
    pub fn overall_subsidy_frequency(&self) -> f64 {
        let n = self.miners();
        if n == 0 {
            return 0.0;
        }
        (0..n).map(|i| self.subsidy_frequency(i)).sum::<f64>() / n as f64
    }
}

fn mean(values: impl Iterator<Item = f64>) -> f64 {
    let (sum, n) = values.fold((0.0, 0usize), |(s, n), v| (s + v, n + 1));
    if n == 0 {
        0.0
    } else {
        sum / n as f64
    }
}
