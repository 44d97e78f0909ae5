// Drives the hill climber against a synthetic profit function peaked at s = 0.8.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use przi::prsh::{PrshConfig, PrshState};

/// Expected profit per second for strategy `s`.
fn payoff(s: f64) -> f64 {
    10.0 - 8.0 * (s - 0.8).powi(2)
}

fn run_example() -> przi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let config = PrshConfig { k: 4, eval_period_s: 60.0, sigma: 0.05, ..PrshConfig::default() };
    let mut climber = PrshState::new(config, 0.0, &mut rng)?;

    let mut t = 0.0;
    while climber.cycles() < 200 {
        t += 1.0;
        let s = climber.active().get();
        let noisy = payoff(s) + rng.random_range(-2.0..2.0);
        climber.record_profit(noisy.round() as i64);
        if let Some(report) = climber.advance(t, &mut rng) {
            if report.time as u64 % 6000 < 240 {
                println!("t={:>6}s elite s = {:+.3}", report.time, report.elite.get());
            }
        }
    }
    println!("after {} cycles the elite is {:+.3}", climber.cycles(), climber.elite().get());
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
