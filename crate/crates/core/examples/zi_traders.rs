// Quote prices from the four fixed zero-intelligence rules.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use przi::exchange::{Price, Side};
use przi::traders::{gvwy_price, shvr_price, zic_price, ziu_price, ShaverSeeds};

fn run_example() -> przi::Result<()> {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let max = Price(500);
    let limit = Price(100);

    let ziu: Vec<u32> = (0..8).map(|_| ziu_price(&mut rng, max).0).collect();
    let zic: Vec<u32> = (0..8).map(|_| zic_price(&mut rng, Side::Buy, limit, max).0).collect();
    println!("ZIU buyer, limit ignored: {ziu:?}");
    println!("ZIC buyer, limit {limit}:   {zic:?}");
    println!("GVWY buyer quotes its limit: {}", gvwy_price(limit));

    let seeds = ShaverSeeds::defaults(max);
    for (bid, ask) in [(None, None), (Some(Price(80)), Some(Price(120))), (Some(Price(100)), None)] {
        println!(
            "SHVR buyer with bid {bid:?} ask {ask:?} -> {}",
            shvr_price(Side::Buy, limit, bid, ask, seeds)
        );
    }
    Ok(())
}

fn main() -> przi::Result<()> {
    run_example()
}
