// Ten simulated minutes of a mixed market built directly on the session API.

use std::sync::Arc;

use przi::exchange::{Price, Side};
use przi::experiment::metrics::smith_alpha;
use przi::session::SessionParams;
use przi::traders::StrategySpec;
use przi::{LutCache, Session};

fn run_example() -> przi::Result<()> {
    let params = SessionParams { duration: 600.0, seed: 42, ..SessionParams::default() };
    let mut session = Session::new(params, Arc::new(LutCache::new()));
    let sellers = [StrategySpec::Zic, StrategySpec::Gvwy, StrategySpec::Przi { s: 0.5 }, StrategySpec::Przi { s: -0.5 }];
    for spec in sellers {
        for _ in 0..5 {
            session.add_trader(Side::Sell, Price(60), spec)?;
            session.add_trader(Side::Buy, Price(100), StrategySpec::Zic)?;
        }
    }

    let mut prices = Vec::new();
    session.run_to_end(|t| prices.push(t.price.as_f64()));
    println!("{} trades in {} steps", session.trade_count(), session.clock().steps());
    println!("buyer profit {} seller profit {}", session.buyer_profit(), session.seller_profit());
    if let Some(alpha) = smith_alpha(&prices, 80.0) {
        println!("Smith's alpha around 80: {alpha:.2}%");
    }

    let mut by_kind: Vec<(String, i64, u64)> = Vec::new();
    for t in session.traders().iter().filter(|t| t.side() == Side::Sell) {
        let label = format!("{} s={:+.1}", t.kind(), t.active_strategy().get());
        match by_kind.iter_mut().find(|(l, _, _)| *l == label) {
            Some(entry) => {
                entry.1 += t.profit();
                entry.2 += t.trade_count();
            }
            None => by_kind.push((label, t.profit(), t.trade_count())),
        }
    }
    for (label, profit, trades) in by_kind {
        println!("sellers {label:<12} profit {profit:>6} over {trades} trades");
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
