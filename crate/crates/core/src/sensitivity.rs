//! Imbalance- and opinion-driven modulation of PRZI strategy values.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exchange::{OrderBook, Side, TopOfBook};
use crate::przi::StrategyValue;

/// Quantity-weighted blend of the best prices.
///
/// `p_mu = (ask * q_bid + bid * q_ask) / (q_bid + q_ask)`; with balanced
/// quantities this is the mid-price.
pub fn micro_price(view: &TopOfBook) -> f64 {
    let qb = f64::from(view.bid_qty);
    let qa = f64::from(view.ask_qty);
    (view.ask.as_f64() * qb + view.bid.as_f64() * qa) / (qb + qa)
}

pub fn mid_price(view: &TopOfBook) -> f64 {
    (view.bid.as_f64() + view.ask.as_f64()) / 2.0
}

/// Micro-price minus mid-price. Positive when visible demand exceeds supply.
pub fn imbalance_delta(view: &TopOfBook) -> f64 {
    micro_price(view) - mid_price(view)
}

/// `imbalance_delta` for a live book, `None` when a side is empty.
pub fn book_imbalance(book: &OrderBook) -> Option<f64> {
    book.top_of_book().map(|v| imbalance_delta(&v))
}

/// Saturating odd map from imbalance to strategy: `g x / (1 + |g x|)`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpactFunction {
    pub gain: f64,
}

impl Default for ImpactFunction {
    fn default() -> Self {
        Self { gain: 4.0 }
    }
}

impl ImpactFunction {
    pub fn new(gain: f64) -> Result<Self> {
        if !(gain > 0.0 && gain.is_finite()) {
            return Err(Error::Config(format!("impact gain must be positive, got {gain}")));
        }
        Ok(Self { gain })
    }

    /// Value in `(-1, 1)`.
    pub fn apply(&self, delta: f64) -> f64 {
        let x = self.gain * delta;
        x / (1.0 + x.abs())
    }

    /// Excess demand makes buyers more urgent and sellers more relaxed.
    pub fn to_strategy(&self, delta: f64, side: Side) -> StrategyValue {
        let v = self.apply(delta);
        StrategyValue::clamped(match side {
            Side::Buy => v,
            Side::Sell => -v,
        })
    }
}

/// How an opinion in `[-1, 1]` maps onto a strategy value.
#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum OpinionMapping {
    /// Sellers take `s = w`, buyers `s = -w`.
    #[default]
    Identity,
    /// `tanh(g w) / tanh(g)` with the same sign convention.
    Sigmoid { gain: f64 },
}

/// Opinion-to-strategy mapping for a trader on `side`.
pub fn opinion_to_strategy(opinion: f64, side: Side, mapping: OpinionMapping) -> Result<StrategyValue> {
    if !(-1.0..=1.0).contains(&opinion) {
        return Err(Error::Config(format!("opinion {opinion} outside [-1, 1]")));
    }
    let v = match mapping {
        OpinionMapping::Identity => opinion,
        OpinionMapping::Sigmoid { gain } => {
            if !(gain > 0.0) {
                return Err(Error::Config("sigmoid gain must be positive".into()));
            }
            (gain * opinion).tanh() / gain.tanh()
        }
    };
    Ok(StrategyValue::clamped(match side {
        Side::Sell => v,
        Side::Buy => -v,
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::Price;

    fn view(bid: u32, qb: u32, ask: u32, qa: u32) -> TopOfBook {
        TopOfBook {
            bid: Price(bid),
            bid_qty: qb,
            ask: Price(ask),
            ask_qty: qa,
        }
    }

    #[test]
    fn micro_price_examples() {
        assert_eq!(micro_price(&view(10, 2, 12, 2)), 11.0);
        assert_eq!(micro_price(&view(10, 3, 12, 1)), 11.5);
        assert_eq!(micro_price(&view(10, 1, 12, 3)), 10.5);
    }

    #[test]
    fn delta_examples() {
        assert_eq!(imbalance_delta(&view(10, 5, 12, 5)), 0.0);
        assert_eq!(imbalance_delta(&view(10, 3, 12, 1)), 0.5);
        assert_eq!(imbalance_delta(&view(10, 1, 12, 3)), -0.5);
    }

    #[test]
    fn live_book_delta() {
        let mut book = OrderBook::new();
        assert_eq!(book_imbalance(&book), None);
        book.place(1, Side::Buy, Price(10));
        book.place(2, Side::Buy, Price(10));
        book.place(3, Side::Buy, Price(10));
        book.place(4, Side::Sell, Price(12));
        assert_eq!(book_imbalance(&book), Some(0.5));
    }

    #[test]
    fn impact_examples() {
        let f = ImpactFunction::default();
        assert_eq!(f.to_strategy(0.0, Side::Buy).get(), 0.0);
        assert_eq!(f.to_strategy(0.0, Side::Sell).get(), 0.0);
        assert!((f.to_strategy(0.5, Side::Buy).get() - 2.0 / 3.0).abs() < 1e-12);
        assert!((f.to_strategy(0.5, Side::Sell).get() + 2.0 / 3.0).abs() < 1e-12);
        assert!(ImpactFunction::new(0.0).is_err());
    }

    #[test]
    fn opinion_examples() {
        let id = OpinionMapping::Identity;
        assert_eq!(opinion_to_strategy(1.0, Side::Sell, id).unwrap().get(), 1.0);
        assert_eq!(opinion_to_strategy(1.0, Side::Buy, id).unwrap().get(), -1.0);
        assert_eq!(opinion_to_strategy(0.0, Side::Buy, id).unwrap().get(), 0.0);
        let sig = OpinionMapping::Sigmoid { gain: 2.0 };
        assert!((opinion_to_strategy(1.0, Side::Sell, sig).unwrap().get() - 1.0).abs() < 1e-12);
        assert!(opinion_to_strategy(0.3, Side::Sell, sig).unwrap().get() > 0.3);
        assert!(opinion_to_strategy(1.5, Side::Sell, id).is_err());
    }
}
