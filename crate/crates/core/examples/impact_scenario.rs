// An imbalance-sensitive buyer before and after a burst of extra demand.

use przi::experiment::metrics::{mean, welch_t};
use przi::experiment::runner::{default_script, split_at_time};
use przi::experiment::{run_impact, ImpactConfig};

fn run_example() -> przi::Result<()> {
    let cfg = ImpactConfig::default();
    let events = default_script();
    let quotes = run_impact(&cfg, &events, 9)?;
    let at = events[0].time_s;
    let (pre, post) = split_at_time(&quotes, at, 1000);
    println!("limit {} injection at t={at}s", cfg.limit);
    println!("mean quote before {:.2}, after {:.2}", mean(&pre).unwrap_or(f64::NAN), mean(&post).unwrap_or(f64::NAN));
    if let Some((t, df)) = welch_t(&pre, &post) {
        println!("Welch t {t:.2} on {df:.0} degrees of freedom");
    }
    for q in quotes.iter().step_by(250) {
        println!("t={:>5.2} s={:+.3} price {}", q.time_s, q.strategy, q.price);
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
