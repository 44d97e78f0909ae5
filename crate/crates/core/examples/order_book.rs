// Routes a few quotes through the exchange and prints the resulting trades.

use przi::exchange::{Assignment, Exchange, MatchResult, Price, Quote, Side};

fn run_example() -> przi::Result<()> {
    let mut ex = Exchange::new(Price(200));
    let traders = [(1, Side::Sell, 60), (2, Side::Sell, 70), (3, Side::Buy, 100), (4, Side::Buy, 90)];
    for (trader, side, limit) in traders {
        ex.assign(Assignment { trader, side, limit: Price(limit) });
    }

    let quotes = [(1, Side::Sell, 95), (2, Side::Sell, 85), (4, Side::Buy, 80), (3, Side::Buy, 100)];
    for (i, (trader, side, price)) in quotes.into_iter().enumerate() {
        let q = Quote { trader, side, price: Price(price), time: i as f64 };
        match ex.submit_quote(&q)? {
            MatchResult::Rested => println!("t={i} trader {trader} rests {side:?} at {price}"),
            MatchResult::Trade(t) => println!(
                "t={i} trade at {}: buyer {} gains {}, seller {} gains {}",
                t.price, t.buyer, t.buyer_surplus, t.seller, t.seller_surplus
            ),
        }
        println!("      book: bid {:?} ask {:?}", ex.book().best_bid(), ex.book().best_ask());
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
