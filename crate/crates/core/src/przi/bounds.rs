use rand::Rng;
use serde::{Deserialize, Serialize};

use super::{PriceBounds, StrategyValue};
use crate::exchange::{Price, Side};

/// How a PRZI buyer sets the lower end of its price range.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BuyerFloorPolicy {
    /// The smallest quotable price, one tick.
    #[default]
    ZicStyle,
    /// `max(lowest limit / c_i, tick)`, lowered by lower rival bids.
    Heuristic,
}

/// Information a bound estimator learns from the market.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EstimatorEvent {
    /// The trader received a new limit price.
    Assigned(Price),
    /// Another trader on the same side quoted this price.
    RivalQuote(Price),
}

/// A PRZI trader's private estimate of the far end of its price range.
///
/// Sellers estimate the highest plausible price, starting at `c_i` times the
/// largest limit they have been assigned and rising to any higher rival ask.
/// Buyers mirror this downwards when using [`BuyerFloorPolicy::Heuristic`].
/// Estimates never decay.
#[derive(Clone, Debug, PartialEq)]
pub struct BoundEstimator {
    side: Side,
    coefficient: f64,
    policy: BuyerFloorPolicy,
    extreme_limit: Option<Price>,
    rival: Option<Price>,
    max_price: Price,
}

impl BoundEstimator {
    pub fn new(side: Side, coefficient: f64, policy: BuyerFloorPolicy, max_price: Price) -> Self {
        assert!(coefficient >= 1.0, "bound coefficient must be at least 1");
        Self {
            side,
            coefficient,
            policy,
            extreme_limit: None,
            rival: None,
            max_price,
        }
    }

    /// Draws `c_i = U(1, 10)^0.5`, biased toward small values.
    pub fn draw_coefficient<R: Rng + ?Sized>(rng: &mut R) -> f64 {
        rng.random_range(1.0..10.0_f64).sqrt()
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn observe(&mut self, event: EstimatorEvent) {
        match (self.side, event) {
            (Side::Sell, EstimatorEvent::Assigned(p)) => {
                self.extreme_limit = Some(self.extreme_limit.map_or(p, |q| q.max(p)));
            }
            (Side::Buy, EstimatorEvent::Assigned(p)) => {
                self.extreme_limit = Some(self.extreme_limit.map_or(p, |q| q.min(p)));
            }
            (Side::Sell, EstimatorEvent::RivalQuote(p)) => {
                self.rival = Some(self.rival.map_or(p, |q| q.max(p)));
            }
            (Side::Buy, EstimatorEvent::RivalQuote(p)) => {
                self.rival = Some(self.rival.map_or(p, |q| q.min(p)));
            }
        }
    }

    /// The far bound used at `s = 0`: `p_max` for a seller, `p_min` for a
    /// buyer. `None` until the first assignment.
    pub fn zic_bound(&self) -> Option<Price> {
        let limit = self.extreme_limit?;
        let bound = match (self.side, self.policy) {
            (Side::Sell, _) => {
                let guess = (self.coefficient * limit.as_f64()).round() as u32;
                let guess = Price(guess).max(limit);
                let guess = self.rival.map_or(guess, |r| guess.max(r));
                guess.min(self.max_price).max(limit.min(self.max_price))
            }
            (Side::Buy, BuyerFloorPolicy::ZicStyle) => Price::TICK,
            (Side::Buy, BuyerFloorPolicy::Heuristic) => {
                let guess = Price((limit.as_f64() / self.coefficient).round() as u32).max(Price::TICK);
                self.rival.map_or(guess, |r| guess.min(r)).max(Price::TICK)
            }
        };
        Some(bound)
    }

    /// Price range for strategy `s` given the trader's current `limit` and the
    /// best prices on the book.
    pub fn bounds(
        &self,
        s: StrategyValue,
        limit: Price,
        best_bid: Option<Price>,
        best_ask: Option<Price>,
    ) -> Option<PriceBounds> {
        let zic = self.zic_bound()?;
        let target = shaver_target(self.side, limit, best_bid, best_ask, zic);
        Some(blended_bounds(self.side, s, limit, zic, target))
    }
}

/// One-tick improvement on the best same-side price, limited by `limit`;
/// `cold_start` when that side of the book is empty.
pub(crate) fn shaver_target(
    side: Side,
    limit: Price,
    best_bid: Option<Price>,
    best_ask: Option<Price>,
    cold_start: Price,
) -> Price {
    match side {
        Side::Buy => best_bid.map_or(cold_start, |b| b.up().min(limit)),
        Side::Sell => best_ask.map_or(cold_start, |a| a.down().max(limit)),
    }
}

/// Price range for strategy `s`.
///
/// The near end is always the trader's limit. For `s >= 0` the far end is
/// `zic_bound`; for `s < 0` it moves linearly toward `shaver_target`,
/// reaching it at `s = -1`, which collapses the range onto a single price.
pub fn blended_bounds(
    side: Side,
    s: StrategyValue,
    limit: Price,
    zic_bound: Price,
    shaver_target: Price,
) -> PriceBounds {
    let s = s.get();
    let far = if s < 0.0 {
        let w = -s;
        let v = (1.0 - w) * zic_bound.as_f64() + w * shaver_target.as_f64();
        Price(v.round() as u32)
    } else {
        zic_bound
    };
    let far = match side {
        Side::Sell => far.max(limit),
        Side::Buy => far.min(limit),
    };
    PriceBounds::new(limit, far)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn seller(c: f64) -> BoundEstimator {
        BoundEstimator::new(Side::Sell, c, BuyerFloorPolicy::ZicStyle, Price(500))
    }

    #[test]
    fn seller_initial_estimate_is_coefficient_times_limit() {
        let mut est = seller(2.0);
        assert_eq!(est.zic_bound(), None);
        est.observe(EstimatorEvent::Assigned(Price(60)));
        assert_eq!(est.zic_bound(), Some(Price(120)));
    }

    #[test]
    fn higher_rival_ask_raises_estimate() {
        let mut est = seller(2.0);
        est.observe(EstimatorEvent::Assigned(Price(60)));
        est.observe(EstimatorEvent::RivalQuote(Price(100)));
        assert_eq!(est.zic_bound(), Some(Price(120)));
        est.observe(EstimatorEvent::RivalQuote(Price(150)));
        assert_eq!(est.zic_bound(), Some(Price(150)));
        // no decay
        est.observe(EstimatorEvent::RivalQuote(Price(90)));
        assert_eq!(est.zic_bound(), Some(Price(150)));
    }

    #[test]
    fn seller_estimate_is_capped_by_system_maximum() {
        let mut est = seller(3.0);
        est.observe(EstimatorEvent::Assigned(Price(400)));
        assert_eq!(est.zic_bound(), Some(Price(500)));
    }

    #[test]
    fn fully_relaxed_seller_collapses_to_shaver_price() {
        let mut est = seller(2.0);
        est.observe(EstimatorEvent::Assigned(Price(60)));
        let b = est
            .bounds(StrategyValue::SHVR, Price(60), None, Some(Price(80)))
            .unwrap();
        assert_eq!(b, PriceBounds::new(Price(60), Price(79)));
        // ask already at the limit: the shaver price is the limit itself
        let b = est
            .bounds(StrategyValue::SHVR, Price(60), None, Some(Price(60)))
            .unwrap();
        assert_eq!(b, PriceBounds::single(Price(60)));
    }

    #[test]
    fn half_relaxed_seller_blends_halfway() {
        let mut est = seller(2.0);
        est.observe(EstimatorEvent::Assigned(Price(60)));
        let b = est
            .bounds(StrategyValue::new(-0.5).unwrap(), Price(60), None, Some(Price(81)))
            .unwrap();
        // 0.5 * 120 + 0.5 * 80
        assert_eq!(b.max, Price(100));
    }

    #[test]
    fn buyer_floor_policies() {
        let mut zic = BoundEstimator::new(Side::Buy, 2.0, BuyerFloorPolicy::ZicStyle, Price(500));
        zic.observe(EstimatorEvent::Assigned(Price(100)));
        assert_eq!(zic.zic_bound(), Some(Price::TICK));

        let mut h = BoundEstimator::new(Side::Buy, 2.0, BuyerFloorPolicy::Heuristic, Price(500));
        h.observe(EstimatorEvent::Assigned(Price(100)));
        assert_eq!(h.zic_bound(), Some(Price(50)));
        h.observe(EstimatorEvent::RivalQuote(Price(40)));
        assert_eq!(h.zic_bound(), Some(Price(40)));
        let b = h
            .bounds(StrategyValue::SHVR, Price(100), Some(Price(70)), None)
            .unwrap();
        // the range ends at the shaver target; the point mass sits there
        assert_eq!(b, PriceBounds::new(Price(71), Price(100)));
    }

    #[test]
    fn coefficient_draws_stay_in_range() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..10_000 {
            let c = BoundEstimator::draw_coefficient(&mut rng);
            assert!((1.0..10f64.sqrt()).contains(&c));
        }
    }
}
