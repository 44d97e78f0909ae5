// Micro-price, top-of-book imbalance and how imbalance maps to urgency.

use przi::exchange::{Price, Side, TopOfBook};
use przi::sensitivity::{imbalance_delta, micro_price, mid_price, opinion_to_strategy, ImpactFunction, OpinionMapping};

fn run_example() -> przi::Result<()> {
    let impact = ImpactFunction::new(4.0)?;
    for (qb, qa) in [(1, 1), (3, 1), (1, 3), (10, 1)] {
        let view = TopOfBook { bid: Price(10), bid_qty: qb, ask: Price(12), ask_qty: qa };
        let delta = imbalance_delta(&view);
        println!(
            "bid qty {qb:>2} ask qty {qa}: mid {:.2} micro {:.3} delta {delta:+.3} -> buyer s {:+.3}, seller s {:+.3}",
            mid_price(&view),
            micro_price(&view),
            impact.to_strategy(delta, Side::Buy).get(),
            impact.to_strategy(delta, Side::Sell).get()
        );
    }

    let sigmoid = OpinionMapping::Sigmoid { gain: 2.0 };
    for w in [-1.0, -0.5, 0.0, 0.5, 1.0] {
        println!(
            "opinion {w:+.1}: seller s {:+.3} (identity) {:+.3} (sigmoid)",
            opinion_to_strategy(w, Side::Sell, OpinionMapping::Identity)?.get(),
            opinion_to_strategy(w, Side::Sell, sigmoid)?.get()
        );
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
