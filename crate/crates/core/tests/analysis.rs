use poolsim::analysis::{
    bb_audit, br_dynamics, chernoff_tail_upper, docdic_check, expected_payoff_mc, floor_payoff, jensen_check,
    monte_carlo, ocdic_check, pps_expected_reward_closed, BudgetBounds, DemandSource, PayoffProblem, SearchSettings,
    Verdict, WindowSource,
};
use poolsim::mechanisms::{Mechanism, RollingWindow};
use poolsim::model::{gamma_sample, CostFunction, DemandModel, MinerProfile, PlatformParams, StrategyProfile};
use poolsim::rng::{Purpose, SeedStreams};
use poolsim::sim::{run_simulation, Scenario};
use rand::Rng;

fn linear(capacities: &[f64], rate: f64) -> Vec<MinerProfile> {
    capacities
        .iter()
        .enumerate()
        .map(|(i, &a)| MinerProfile::new(i, a, CostFunction::Linear { rate }).unwrap())
        .collect()
}

fn settings(replicas: u64, seed: u64) -> SearchSettings {
    SearchSettings { grid_points: 64, replicas, seed }
}

/// The single-miner PPSS economy used throughout: A=1, k=100, λ=0.8,
/// b=p=1, C(a)=150a, M=300.
fn subsidy_economy() -> (PlatformParams, Vec<MinerProfile>, DemandModel) {
    let params = PlatformParams { productivity: 100.0, lambda: 0.8, window: 5, ..Default::default() };
    (params, linear(&[1.0], 150.0), DemandModel::Constant { value: 300.0 })
}

#[test]
fn payoff_examples() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let demand = DemandModel::Constant { value: 1000.0 };
    let one = linear(&[10.0], 1.0);
    let e = expected_payoff_mc(Mechanism::Pps, 0, &StrategyProfile::full(&one), &params, &one, &demand, 10_000, 1)
        .unwrap();
    assert!((e.mean - 10.0).abs() <= e.ci_half_width.max(1e-9), "{e:?}");

    let two = linear(&[10.0, 30.0], 1.0);
    let e = expected_payoff_mc(Mechanism::Pps, 0, &StrategyProfile::full(&two), &params, &two, &demand, 20_000, 2)
        .unwrap();
    assert!((e.reward_mean - 20.0).abs() <= 3.0 * e.ci_half_width, "{e:?}");
}

#[test]
fn closed_form_agrees_with_monte_carlo_under_ample_demand() {
    let mut rng = SeedStreams::new(4).stream(Purpose::Policy, 0, 0, 0);
    for c in 0..20 {
        let n = rng.random_range(1..=4);
        let caps: Vec<f64> = (0..n).map(|_| rng.random_range(0.2..5.0)).collect();
        let profiles = linear(&caps, 0.5);
        let params = PlatformParams { productivity: rng.random_range(0.5..4.0), ..Default::default() };
        let allocs: Vec<f64> = caps.iter().map(|&a| rng.random_range(0.1..=1.0) * a).collect();
        let sum: f64 = allocs.iter().sum();
        let m = 3.0 * params.productivity * caps.iter().sum::<f64>();
        let strategy = StrategyProfile::new(allocs.clone(), &profiles).unwrap();
        let demand = DemandModel::Constant { value: m };
        let e = expected_payoff_mc(Mechanism::Pps, 0, &strategy, &params, &profiles, &demand, 10_000, c).unwrap();
        let closed = pps_expected_reward_closed(allocs[0], sum, &params, m);
        let tol = (3.0 * e.ci_half_width).max(0.005 * closed);
        assert!((e.reward_mean - closed).abs() <= tol, "config {c}: {} vs {closed}", e.reward_mean);
    }
}

#[test]
fn chernoff_bounds_dominate_the_tail() {
    let mut rng = SeedStreams::new(6).stream(Purpose::Policy, 0, 0, 0);
    for case in 0..50 {
        let s: f64 = rng.random_range(1.0..500.0);
        let t = s * rng.random_range(0.05..0.99);
        let b = chernoff_tail_upper(s, t).unwrap();
        let tail = monte_carlo(20_000, case, |streams, r| {
            let mut g = streams.stream(Purpose::Difficulty, 0, 0, r);
            f64::from(u8::from(gamma_sample(s, &mut g).unwrap() <= t))
        });
        assert!(tail.mean - tail.ci_half_width <= b.standard, "s={s} t={t}: {} > {}", tail.mean, b.standard);
        assert!(b.standard <= b.relaxed + 1e-15);
    }
}

#[test]
fn chernoff_example_tail() {
    let b = chernoff_tail_upper(100.0, 80.0).unwrap();
    let tail = monte_carlo(1_000_000, 1, |streams, r| {
        let mut g = streams.stream(Purpose::Difficulty, 0, 0, r);
        f64::from(u8::from(gamma_sample(100.0, &mut g).unwrap() <= 80.0))
    });
    // Exact value from the regularized incomplete gamma function.
    let exact = statrs::function::gamma::gamma_lr(100.0, 80.0);
    assert!((tail.mean - exact).abs() < 3.0 * tail.ci_half_width + 1e-4, "{} vs {exact}", tail.mean);
    assert!(tail.mean <= b.standard);
}

#[test]
fn floor_is_sound_above_the_threshold() {
    let (params, profiles, demand) = subsidy_economy();
    let m = &profiles[0];
    for i in 0..16 {
        let a = i as f64 / 15.0;
        if a < params.lambda * m.capacity {
            continue;
        }
        let e = expected_payoff_mc(Mechanism::Ppss, 0, &StrategyProfile::new(vec![a], &profiles).unwrap(), &params, &profiles, &demand, 20_000, 3)
            .unwrap();
        let floor = floor_payoff(a, m.c_tilde(), &m.cost).unwrap();
        assert!(e.mean >= floor - 3.0 * e.ci_half_width, "a={a}: {} < {floor}", e.mean);
    }
}

/// Below `λ·A` the subsidy almost never fires and the floor `a·c̃ − C(a)`
/// is not a lower bound on the payoff: with linear costs it is 0 while the
/// payoff is `(b·k − r)·a < 0`.
#[test]
fn floor_fails_below_the_threshold() {
    let (params, profiles, demand) = subsidy_economy();
    let a = 0.4;
    let e = expected_payoff_mc(Mechanism::Ppss, 0, &StrategyProfile::new(vec![a], &profiles).unwrap(), &params, &profiles, &demand, 20_000, 3)
        .unwrap();
    assert!(e.mean + 3.0 * e.ci_half_width < floor_payoff(a, 150.0, &profiles[0].cost).unwrap());
}

#[test]
fn jensen_holds_where_g_is_convex() {
    let (params, profiles, _) = subsidy_economy();
    let j = jensen_check(&profiles[0], &params, 1.0, (84.0, 500.0), 50_000, 2).unwrap();
    assert!(j.holds(), "{j:?}");
    assert!(j.coverage > 0.9);
}

#[test]
fn pps_ocdic_follows_linear_threshold() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let demand = DemandModel::Constant { value: 3.0 * 2.0 * 3.0 };
    let cheap = linear(&[1.0, 2.0], 0.5);
    let r = ocdic_check(Mechanism::Pps, &params, &cheap, &demand, &settings(10_000, 1), None).unwrap();
    assert!(r.all_pass());
    let dear = linear(&[1.0, 2.0], 3.0);
    let r = ocdic_check(Mechanism::Pps, &params, &dear, &demand, &settings(10_000, 1), None).unwrap();
    for m in &r.miners {
        assert_eq!(m.verdict, Verdict::Fail);
        assert!(m.response.argmax.abs() < 1e-9);
        assert!(m.response.value.abs() < 1e-9);
    }
}

#[test]
fn pps_ocdic_flips_with_marginal_cost_at_capacity() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let demand = DemandModel::Constant { value: 12.0 };
    for (factor, expect) in [(0.8, Verdict::Pass), (1.2, Verdict::Fail)] {
        // C(a) = c·a², C'(A) = 2c at A = 1
        let c = factor * 2.0 / 2.0;
        let profiles = vec![MinerProfile::new(0, 1.0, CostFunction::Power { scale: c, exponent: 2.0 }).unwrap()];
        let r = ocdic_check(Mechanism::Pps, &params, &profiles, &demand, &settings(10_000, 5), None).unwrap();
        assert_eq!(r.miners[0].verdict, expect, "factor {factor}: {:?}", r.miners[0].response.argmax);
    }
}

#[test]
fn ppss_ocdic_is_judged_on_the_floor() {
    let (params, profiles, demand) = subsidy_economy();
    let r = ocdic_check(Mechanism::Ppss, &params, &profiles, &demand, &settings(2_000, 1), None).unwrap();
    assert!(r.all_pass());
    assert!(r.miners[0].expected_payoff_argmax.is_some());
}

#[test]
fn pps_docdic_counterexample() {
    let params = PlatformParams { productivity: 10.0, ..Default::default() };
    let profiles = linear(&[1.0, 1.0], 1.0);
    let r = docdic_check(Mechanism::Pps, &params, &profiles, 2.0, &[], &settings(10_000, 7), None).unwrap();
    let a = r.miners[0].response.argmax;
    assert!((a - (2f64.sqrt() - 1.0)).abs() < 0.05, "{a}");
    assert_eq!(r.miners[0].verdict, Verdict::Fail);
}

#[test]
fn pps_docdic_passes_with_ample_demand() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let profiles = linear(&[1.0, 1.0], 0.5);
    let r = docdic_check(Mechanism::Pps, &params, &profiles, 40.0, &[], &settings(10_000, 7), None).unwrap();
    assert!(r.all_pass());
}

#[test]
fn docdic_rejects_bad_inputs() {
    let params = PlatformParams::default();
    let profiles = linear(&[1.0], 0.5);
    assert!(docdic_check(Mechanism::Pps, &params, &profiles, 0.0, &[], &settings(1_000, 0), None).is_err());
    assert!(docdic_check(Mechanism::Ppss, &params, &profiles, 1.0, &[], &settings(1_000, 0), None).is_err());
}

#[test]
fn given_window_controls_the_subsidy() {
    let (params, profiles, _) = subsidy_economy();
    let problem = |entries: [f64; 4]| PayoffProblem {
        mechanism: Mechanism::Ppss,
        miner: 0,
        params: &params,
        profiles: &profiles,
        demand: DemandSource::Realized(300.0),
        window: WindowSource::Given(RollingWindow::from_entries(5, entries)),
    };
    let full = StrategyProfile::full(&profiles);
    let rich = problem([100.0; 4]).estimate(&full, 5_000, 1).unwrap();
    let poor = problem([0.0; 4]).estimate(&full, 5_000, 1).unwrap();
    assert!(rich.mean > poor.mean + 3.0 * (rich.ci_half_width + poor.ci_half_width));
    // An empty history pays only the base rate b·k·a − C(a) = 100 − 150.
    assert!((poor.mean + 50.0).abs() < 3.0 * poor.ci_half_width + 1e-9, "{poor:?}");
}

#[test]
fn dynamics_reach_dominant_profiles() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let demand = DemandModel::Constant { value: 100.0 };
    let cheap = linear(&[1.0, 2.0], 0.5);
    let cell = |a: f64| 2.0 * a / 63.0;
    let d = br_dynamics(Mechanism::Pps, &params, &cheap, &demand, &StrategyProfile::idle(2), 10, 0.1, &settings(2_000, 1))
        .unwrap();
    assert_eq!(d.iterations(), 2, "{:?}", d.trajectory);
    for (a, cap) in d.trajectory[1].iter().zip([1.0, 2.0]) {
        assert!((a - cap).abs() <= cell(cap), "{:?}", d.trajectory);
    }
    assert!(d.converged());

    let dear = linear(&[1.0, 2.0], 3.0);
    let d = br_dynamics(Mechanism::Pps, &params, &dear, &demand, &StrategyProfile::full(&dear), 10, 1e-6, &settings(2_000, 1))
        .unwrap();
    for (a, cap) in d.fixed_point.expect("converges").iter().zip([1.0, 2.0]) {
        assert!(a.abs() <= cell(cap));
    }
}

/// The symmetric stationary point of `M·a_other/(a + a_other)² = r` with
/// `M = 2`, `r = 1` is `a = 0.5`, and a mutual best response.
#[test]
fn dynamics_find_interior_profile_under_tight_demand() {
    let params = PlatformParams { productivity: 10.0, ..Default::default() };
    let profiles = linear(&[1.0, 1.0], 1.0);
    let demand = DemandModel::Constant { value: 2.0 };
    let s = settings(10_000, 2);
    let d = br_dynamics(Mechanism::Pps, &params, &profiles, &demand, &StrategyProfile::full(&profiles), 30, 0.02, &s)
        .unwrap();
    let fp = d.fixed_point.expect("converges");
    for &a in &fp {
        assert!((a - 0.5).abs() < 0.05, "{fp:?}");
    }
    let fixed = StrategyProfile::new(fp.clone(), &profiles).unwrap();
    for i in 0..2 {
        let problem = PayoffProblem {
            mechanism: Mechanism::Pps,
            miner: i,
            params: &params,
            profiles: &profiles,
            demand: DemandSource::Model(demand),
            window: WindowSource::Warm,
        };
        let again = problem.best_response(&fixed, &s).unwrap().argmax;
        assert!((again - fp[i]).abs() <= 0.02 + 1e-12);
    }
}

#[test]
fn audits_pps_and_ppss_ledgers() {
    let params = PlatformParams { productivity: 2.0, ..Default::default() };
    let sc = Scenario::full_power(params, linear(&[1.0, 3.0], 0.5), DemandModel::Uniform { low: 4.0, high: 12.0 }, Mechanism::Pps, 5_000);
    let ledger = run_simulation(&sc, 1).unwrap();
    let audit = bb_audit(&ledger, &params, &BudgetBounds { theta: 0.0, gamma: 1.0 }).unwrap();
    assert!(audit.per_round_pass && audit.long_term_pass);
    assert!(audit.max_ratio <= 1.0 + 1e-12);

    let (params, profiles, demand) = subsidy_economy();
    let sc = Scenario::full_power(params, profiles, demand, Mechanism::Ppss, 5_000);
    let ledger = run_simulation(&sc, 1).unwrap();
    let audit = bb_audit(&ledger, &params, &BudgetBounds { theta: 0.0, gamma: 150.0 / 300.0 }).unwrap();
    assert!(!audit.long_term_pass);
    assert!(audit.mean_ratio - audit.ci_half_width > 0.5);
}

#[test]
fn idle_ledger_audits_to_zero() {
    let params = PlatformParams::default();
    let mut sc = Scenario::full_power(params, linear(&[1.0], 0.5), DemandModel::Constant { value: 5.0 }, Mechanism::Pps, 10);
    sc.policies = vec![poolsim::sim::MinerPolicy::Static { allocation: 0.0 }];
    let audit = bb_audit(&run_simulation(&sc, 0).unwrap(), &params, &BudgetBounds::default()).unwrap();
    assert_eq!(audit.mean_ratio, 0.0);
    assert!(audit.long_term_pass);
    assert!(bb_audit(&Default::default(), &params, &BudgetBounds::default()).is_err());
}
