// Sharing lookup tables between traders through one cache.

use std::sync::Arc;

use przi::exchange::{Price, Side};
use przi::przi::{LutCache, PriceBounds, StrategyValue};

fn run_example() -> przi::Result<()> {
    let cache = LutCache::new();
    let bounds = PriceBounds::new(Price(60), Price(140));
    let s = StrategyValue::new(0.3)?;

    let a = cache.distribution(s, bounds, Side::Sell);
    let b = cache.distribution(s, bounds, Side::Sell);
    println!("same table shared: {}", Arc::ptr_eq(&a, &b));

    // strategies closer than the key resolution share a table too
    let near = cache.distribution(StrategyValue::new(0.30000001)?, bounds, Side::Sell);
    println!("nearby s shares it: {}", Arc::ptr_eq(&a, &near));

    for i in 0..50 {
        cache.distribution(StrategyValue::clamped(f64::from(i) / 50.0), bounds, Side::Buy);
    }
    println!("tables held: {}, tables built: {}", cache.len(), cache.builds());
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
