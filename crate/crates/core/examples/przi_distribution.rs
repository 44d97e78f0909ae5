// Quote-price distributions across the strategy range, plus a CSV dump of one.

use przi::exchange::{Price, Side};
use przi::przi::{build_distribution, write_debug_csv, PriceBounds, StrategyValue};

fn run_example() -> przi::Result<()> {
    let bounds = PriceBounds::new(Price(1), Price(100));
    println!("buyer with limit 100, prices 1..=100");
    println!("{:>6} {:>8} {:>8} {:>8}", "s", "mean", "p(1)", "p(100)");
    for s in [-1.0, -0.75, -0.5, -0.25, 0.0, 0.25, 0.5, 0.75, 1.0] {
        let d = build_distribution(StrategyValue::new(s)?, bounds, Side::Buy);
        println!(
            "{s:>6.2} {:>8.2} {:>8.4} {:>8.4}",
            d.mean(),
            d.probability(Price(1)),
            d.probability(Price(100))
        );
    }

    let d = build_distribution(StrategyValue::new(0.5)?, PriceBounds::new(Price(60), Price(70)), Side::Sell);
    println!("\nseller, s = 0.5, prices 60..=70:");
    let mut csv = Vec::new();
    write_debug_csv(&d, &mut csv)?;
    print!("{}", String::from_utf8_lossy(&csv));
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
