use super::{budget_ratio, scale_delta, RewardOutcome, RollingWindow};
use crate::error::{Error, Result};
use crate::model::{MinerProfile, PlatformParams, RoundTranscript};

/// Subsidy indicator `B_i`.
///
/// True iff the newest `N − 1` window entries plus the current round's
/// difficulty reach `λ·A_i·k` per round summed. While the window is still
/// filling, the threshold covers only the rounds actually summed.
pub fn subsidy_indicator(
    window: &RollingWindow,
    profile: &MinerProfile,
    params: &PlatformParams,
    current: f64,
) -> bool {
    let (prior, terms) = window.recent(params.window - 1);
    let per_round = params.lambda * profile.capacity * params.productivity;
    prior + current >= per_round * (terms + 1) as f64
}

/// Subsidy shape `K = 1 − x·e^(1−x)` with `x = λ·A_i·k / D`.
///
/// `K` lies in `[0, 1)`, vanishes at `D = λ·A_i·k` and approaches 1 on
/// both sides, so it is not monotone in `D`.
pub fn subsidy_shape(difficulty: f64, profile: &MinerProfile, params: &PlatformParams) -> Result<f64> {
    if !(difficulty > 0.0) {
        return Err(Error::Domain { what: "difficulty for subsidy shape", value: difficulty });
    }
    let x = params.lambda * profile.capacity * params.productivity / difficulty;
    // exp(1 - x) underflows for huge x, where K is 1 to machine precision.
    Ok(1.0 - x * (1.0 - x).exp())
}

/// Per-unit subsidy `(c̃_i/k − b) / max(K, eps_k)`, clamped at zero when
/// the platform runs with `subsidy_clamp_nonneg` and `c̃_i/k < b`.
pub fn subsidy_factor(difficulty: f64, profile: &MinerProfile, params: &PlatformParams) -> Result<f64> {
    let shape = subsidy_shape(difficulty, profile, params)?;
    let numerator = profile.c_tilde() / params.productivity - params.base_reward;
    if params.subsidy_clamp_nonneg && numerator < 0.0 {
        return Ok(0.0);
    }
    Ok(numerator / shape.max(params.eps_k))
}

/// One miner's PPSS reward and subsidy indicator.
pub fn ppss_miner_reward(
    difficulty: f64,
    total: f64,
    demand: f64,
    params: &PlatformParams,
    profile: &MinerProfile,
    window: &RollingWindow,
) -> (f64, bool) {
    let flag = subsidy_indicator(window, profile, params, difficulty);
    if total <= 0.0 || difficulty <= 0.0 {
        return (0.0, flag);
    }
    let subsidy = if flag {
        subsidy_factor(difficulty, profile, params).expect("difficulty is positive")
    } else {
        0.0
    };
    let rate = params.base_reward + subsidy;
    (difficulty / total * rate * total.min(demand), flag)
}

pub fn ppss_reward(
    transcript: &RoundTranscript,
    params: &PlatformParams,
    profiles: &[MinerProfile],
    windows: &[RollingWindow],
) -> Result<RewardOutcome> {
    let n = transcript.difficulties.len();
    if profiles.len() != n || windows.len() != n {
        return Err(Error::Precondition(format!(
            "transcript has {n} miners but {} profiles and {} windows",
            profiles.len(),
            windows.len()
        )));
    }
    let (rewards, subsidy_flags): (Vec<f64>, Vec<bool>) = transcript
        .difficulties
        .iter()
        .zip(profiles.iter().zip(windows))
        .map(|(&d, (profile, window))| {
            ppss_miner_reward(d, transcript.total, transcript.demand, params, profile, window)
        })
        .unzip();
    Ok(RewardOutcome {
        budget_ratio: budget_ratio(&rewards, transcript.demand, params.price),
        scale_delta: scale_delta(transcript.total, transcript.demand),
        rewards,
        subsidy_flags,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mechanisms::pps_reward;
    use crate::model::CostFunction;

    fn miner(capacity: f64, rate: f64) -> MinerProfile {
        MinerProfile::new(0, capacity, CostFunction::Linear { rate }).unwrap()
    }

    fn params(k: f64, lambda: f64, n: usize) -> PlatformParams {
        PlatformParams { productivity: k, lambda, window: n, ..Default::default() }
    }

    #[test]
    fn indicator_boundary_is_inclusive() {
        let p = params(100.0, 0.8, 1);
        let m = miner(1.0, 150.0);
        let w = RollingWindow::new(1);
        assert!(subsidy_indicator(&w, &m, &p, 80.0));
        assert!(!subsidy_indicator(&w, &m, &p, 80.0 - 1e-9));
    }

    #[test]
    fn indicator_uses_n_minus_one_prior_rounds() {
        let p = params(100.0, 0.8, 5);
        let m = miner(1.0, 150.0);
        let w = RollingWindow::from_entries(5, [999.0, 87.5, 87.5, 87.5, 87.5]);
        // 350 + 60 = 410 >= 400; the evicted-next 999 is not counted
        assert!(subsidy_indicator(&w, &m, &p, 60.0));
        assert!(!subsidy_indicator(&w, &m, &p, 40.0));
    }

    #[test]
    fn indicator_prorates_cold_start() {
        let p = params(100.0, 0.8, 5);
        let m = miner(1.0, 150.0);
        let w = RollingWindow::from_entries(5, [70.0]);
        // two rounds summed, threshold 160
        assert!(subsidy_indicator(&w, &m, &p, 90.0));
        assert!(!subsidy_indicator(&w, &m, &p, 89.0));
        assert!(subsidy_indicator(&RollingWindow::new(5), &m, &p, 80.0));
    }

    #[test]
    fn shape_examples() {
        let p = params(2.0, 0.8, 1);
        let k20 = subsidy_shape(10.0, &miner(20.0, 1.0), &p).unwrap();
        let k50 = subsidy_shape(10.0, &miner(50.0, 1.0), &p).unwrap();
        assert!((k20 - 0.645_429_893_240_531_6).abs() < 1e-12, "{k20}");
        assert!((k50 - 0.992_704_944_275_563_9).abs() < 1e-12, "{k50}");
        assert_eq!(subsidy_shape(32.0, &miner(20.0, 1.0), &p).unwrap(), 0.0);
    }

    #[test]
    fn shape_rejects_nonpositive_difficulty() {
        let p = params(2.0, 0.8, 1);
        assert!(matches!(subsidy_shape(0.0, &miner(1.0, 1.0), &p), Err(Error::Domain { .. })));
        assert!(subsidy_shape(-3.0, &miner(1.0, 1.0), &p).is_err());
    }

    #[test]
    fn shape_is_piecewise_monotone() {
        let p = params(100.0, 0.8, 1);
        let m = miner(1.0, 150.0);
        let pivot = 80.0;
        let below: Vec<f64> = (1..=1000)
            .map(|i| subsidy_shape(pivot * i as f64 / 1001.0, &m, &p).unwrap())
            .collect();
        assert!(below.windows(2).all(|w| w[1] <= w[0]));
        let above: Vec<f64> = (1..=1000)
            .map(|i| subsidy_shape(pivot * (1.0 + i as f64 / 100.0), &m, &p).unwrap())
            .collect();
        assert!(above.windows(2).all(|w| w[1] > w[0]));
        assert!(below.iter().chain(&above).all(|&k| (0.0..=1.0).contains(&k)));
    }

    #[test]
    fn factor_examples() {
        let p = params(100.0, 0.8, 5);
        let m = miner(1.0, 150.0);
        // D = a·k at full power: K = 1 − 0.8·e^0.2
        let f = subsidy_factor(100.0, &m, &p).unwrap();
        assert!((f - 0.5 / 0.022_877_793_471_864_13).abs() < 1e-9, "{f}");
        assert!((f - 21.855).abs() < 1e-3);

        let flat = miner(1.0, 100.0);
        assert_eq!(subsidy_factor(100.0, &flat, &p).unwrap(), 0.0);

        // K = 0 exactly, floored at eps_k
        assert_eq!(subsidy_factor(80.0, &m, &p).unwrap(), 0.5 / 1e-3);
    }

    #[test]
    fn negative_numerator_clamped_or_literal() {
        let m = miner(1.0, 50.0); // c̃/k = 0.5 < b = 1
        let clamped = params(100.0, 0.8, 5);
        assert_eq!(subsidy_factor(100.0, &m, &clamped).unwrap(), 0.0);
        let literal = PlatformParams { subsidy_clamp_nonneg: false, ..clamped };
        let f = subsidy_factor(100.0, &m, &literal).unwrap();
        assert!(f < 0.0);
        assert!((f + 0.5 / 0.022_877_793_471_864_13).abs() < 1e-9);
    }

    #[test]
    fn single_miner_chain() {
        // K(90) = 1 − (8/9)e^(1/9) = 0.0066497166738989790 (30-digit reference)
        let p = params(100.0, 0.8, 1);
        let m = miner(1.0, 150.0);
        let t = RoundTranscript::new(0, 200.0, vec![1.0], vec![90.0]);
        let out = ppss_reward(&t, &p, &[m], &[RollingWindow::new(1)]).unwrap();
        assert_eq!(out.subsidy_flags, vec![true]);
        assert!((out.rewards[0] - 6857.205_612_929_491_5).abs() < 1e-6, "{}", out.rewards[0]);
        assert_eq!(out.scale_delta, 1.0);
    }

    #[test]
    fn idle_round_pays_nothing() {
        let p = params(100.0, 0.8, 1);
        let m = miner(1.0, 150.0);
        let t = RoundTranscript::new(0, 200.0, vec![0.0], vec![0.0]);
        let out = ppss_reward(&t, &p, &[m], &[RollingWindow::from_entries(1, [500.0])]).unwrap();
        assert_eq!(out.rewards, vec![0.0]);
    }

    #[test]
    fn zero_difficulty_miner_gets_no_subsidy() {
        let p = params(100.0, 0.8, 3);
        let profiles = [miner(1.0, 150.0), miner(1.0, 150.0)];
        let windows = [
            RollingWindow::from_entries(3, [500.0, 500.0]),
            RollingWindow::from_entries(3, [500.0, 500.0]),
        ];
        let t = RoundTranscript::new(0, 500.0, vec![0.0, 1.0], vec![0.0, 100.0]);
        let out = ppss_reward(&t, &p, &profiles, &windows).unwrap();
        assert_eq!(out.rewards[0], 0.0);
        assert!(out.rewards[1] > 100.0);
    }

    #[test]
    fn no_flags_means_pps() {
        let p = params(100.0, 0.8, 4);
        let profiles = [miner(1.0, 150.0), miner(2.0, 150.0)];
        let windows = [RollingWindow::new(4), RollingWindow::new(4)];
        // both far below their thresholds
        let t = RoundTranscript::new(0, 15.0, vec![0.1, 0.1], vec![7.0, 11.0]);
        let ppss = ppss_reward(&t, &p, &profiles, &windows).unwrap();
        assert_eq!(ppss.subsidy_flags, vec![false, false]);
        assert_eq!(ppss.rewards, pps_reward(&t, &p).rewards);
    }

    #[test]
    fn mismatched_inputs_rejected() {
        let p = params(100.0, 0.8, 4);
        let t = RoundTranscript::new(0, 15.0, vec![0.1, 0.1], vec![7.0, 11.0]);
        assert!(ppss_reward(&t, &p, &[miner(1.0, 1.0)], &[RollingWindow::new(4)]).is_err());
    }
}
