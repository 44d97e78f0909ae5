//! Quote-price rules of the fixed zero-intelligence strategies.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::exchange::{Price, Side};

/// Uniform over `[1, max_price]`, ignoring the limit.
pub fn ziu_price<R: Rng + ?Sized>(rng: &mut R, max_price: Price) -> Price {
    Price(rng.random_range(1..=max_price.0))
}

/// Uniform over `[1, limit]` for buyers and `[limit, max_price]` for sellers.
pub fn zic_price<R: Rng + ?Sized>(rng: &mut R, side: Side, limit: Price, max_price: Price) -> Price {
    match side {
        Side::Buy => Price(rng.random_range(1..=limit.0)),
        Side::Sell => Price(rng.random_range(limit.0..=max_price.0)),
    }
}

/// Where a shaver starts when its side of the book is empty.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ShaverSeeds {
    pub low: Price,
    pub high: Price,
}

impl ShaverSeeds {
    pub fn defaults(max_price: Price) -> Self {
        Self {
            low: Price::TICK,
            high: max_price,
        }
    }
}

/// One tick better than the best price on the trader's own side, never
/// beyond its limit.
pub fn shvr_price(
    side: Side,
    limit: Price,
    best_bid: Option<Price>,
    best_ask: Option<Price>,
    seeds: ShaverSeeds,
) -> Price {
    match side {
        Side::Buy => best_bid.map_or(seeds.low, |b| b.up()).min(limit),
        Side::Sell => best_ask.map_or(seeds.high, |a| a.down()).max(limit),
    }
}

pub fn gvwy_price(limit: Price) -> Price {
    limit
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    const MAX: Price = Price(500);

    #[test]
    fn shaver_examples() {
        let seeds = ShaverSeeds::defaults(MAX);
        assert_eq!(shvr_price(Side::Buy, Price(60), Some(Price(50)), None, seeds), Price(51));
        assert_eq!(shvr_price(Side::Buy, Price(60), Some(Price(60)), None, seeds), Price(60));
        assert_eq!(shvr_price(Side::Sell, Price(60), None, None, seeds), Price(500));
        assert_eq!(shvr_price(Side::Buy, Price(60), None, None, seeds), Price(1));
        assert_eq!(shvr_price(Side::Sell, Price(60), None, Some(Price(61)), seeds), Price(60));
        assert_eq!(shvr_price(Side::Sell, Price(60), None, Some(Price(90)), seeds), Price(89));
    }

    #[test]
    fn gvwy_is_the_limit() {
        assert_eq!(gvwy_price(Price(100)), Price(100));
        assert_eq!(gvwy_price(Price(60)), Price(60));
    }

    #[test]
    fn degenerate_ranges() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..100 {
            assert_eq!(ziu_price(&mut rng, Price(1)), Price(1));
            assert_eq!(zic_price(&mut rng, Side::Buy, Price(1), MAX), Price(1));
            assert_eq!(zic_price(&mut rng, Side::Sell, MAX, MAX), MAX);
        }
    }

    #[test]
    fn zic_respects_limits_and_ziu_ignores_them() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let mut ziu_above_limit = false;
        for _ in 0..10_000 {
            let b = zic_price(&mut rng, Side::Buy, Price(100), MAX);
            assert!((1..=100).contains(&b.0));
            let s = zic_price(&mut rng, Side::Sell, Price(60), MAX);
            assert!((60..=500).contains(&s.0));
            ziu_above_limit |= ziu_price(&mut rng, MAX).0 > 50;
        }
        assert!(ziu_above_limit);
    }
}
