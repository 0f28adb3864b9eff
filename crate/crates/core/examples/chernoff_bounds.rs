//! Lower-tail bounds for Gamma output against Monte Carlo, and the
//! subsidy probability bound they imply.
//!
//! cargo run --example chernoff_bounds

use poolsim::analysis::{chernoff_tail_upper, monte_carlo, subsidy_prob_lower};
use poolsim::model::gamma_sample;
use poolsim::rng::Purpose;

fn main() -> poolsim::Result<()> {
    println!("    s       t   P(X<=t) MC    standard    relaxed");
    for (s, t) in [(100.0, 80.0), (100.0, 95.0), (20.0, 10.0), (5.0, 4.0), (500.0, 450.0)] {
        let b = chernoff_tail_upper(s, t)?;
        let tail = monte_carlo(200_000, 1, |streams, r| {
            let mut rng = streams.stream(Purpose::Difficulty, 0, 0, r);
            f64::from(u8::from(gamma_sample(s, &mut rng).expect("positive shape") <= t))
        });
        println!("{s:5} {t:7} {:12.6} {:11.6} {:10.6}", tail.mean, b.standard, b.relaxed);
    }

    println!("\nsubsidy probability lower bound, A = 1, λ = 0.8");
    for a in [0.8, 0.85, 0.9, 1.0] {
        println!("a = {a:4}: {:.6}", subsidy_prob_lower(a, 1.0, 0.8)?);
    }
    Ok(())
}
