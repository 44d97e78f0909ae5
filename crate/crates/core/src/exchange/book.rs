use std::cmp::Reverse;
use std::collections::{BTreeMap, HashMap};

use super::{Price, Side, TraderId};

/// Top-of-book snapshot with the number of resting units at each best price.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TopOfBook {
    pub bid: Price,
    pub bid_qty: u32,
    pub ask: Price,
    pub ask_qty: u32,
}

#[derive(Clone, Copy, Debug)]
struct Resting {
    side: Side,
    price: Price,
    seq: u64,
}

/// Limit order book holding at most one resting unit per trader.
///
/// Price-time priority within each side. Crossing quotes never rest: they
/// execute against the best opposite quote at that quote's price.
#[derive(Clone, Debug, Default)]
pub struct OrderBook {
    bids: BTreeMap<(Reverse<u32>, u64), TraderId>,
    asks: BTreeMap<(u32, u64), TraderId>,
    resting: HashMap<TraderId, Resting>,
    seq: u64,
}

/// Outcome of placing a quote on the book.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Placement {
    Rested,
    Crossed { counterparty: TraderId, price: Price },
}

impl OrderBook {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn best_bid(&self) -> Option<Price> {
        self.bids.keys().next().map(|(Reverse(p), _)| Price(*p))
    }

    pub fn best_ask(&self) -> Option<Price> {
        self.asks.keys().next().map(|(p, _)| Price(*p))
    }

    pub fn best(&self, side: Side) -> Option<Price> {
        match side {
            Side::Buy => self.best_bid(),
            Side::Sell => self.best_ask(),
        }
    }

    /// Number of resting units at the best price of `side`; zero when empty.
    pub fn depth_at_best(&self, side: Side) -> u32 {
        let Some(best) = self.best(side) else {
            return 0;
        };
        let n = match side {
            Side::Buy => self
                .bids
                .keys()
                .take_while(|(Reverse(p), _)| *p == best.0)
                .count(),
            Side::Sell => self.asks.keys().take_while(|(p, _)| *p == best.0).count(),
        };
        n as u32
    }

    /// Both best prices with their quantities, or `None` if either side is empty.
    pub fn top_of_book(&self) -> Option<TopOfBook> {
        Some(TopOfBook {
            bid: self.best_bid()?,
            bid_qty: self.depth_at_best(Side::Buy),
            ask: self.best_ask()?,
            ask_qty: self.depth_at_best(Side::Sell),
        })
    }

    /// `(best bid + best ask) / 2`, or `None` when either side is empty.
    pub fn mid_price(&self) -> Option<f64> {
        Some((self.best_bid()?.as_f64() + self.best_ask()?.as_f64()) / 2.0)
    }

    pub fn resting_quote(&self, trader: TraderId) -> Option<(Side, Price)> {
        self.resting.get(&trader).map(|r| (r.side, r.price))
    }

    /// Number of resting units on `side`.
    pub fn len(&self, side: Side) -> usize {
        match side {
            Side::Buy => self.bids.len(),
            Side::Sell => self.asks.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.resting.is_empty()
    }

    /// Removes the trader's resting quote, if any.
    pub fn cancel(&mut self, trader: TraderId) -> Option<Price> {
        let r = self.resting.remove(&trader)?;
        match r.side {
            Side::Buy => self.bids.remove(&(Reverse(r.price.0), r.seq)),
            Side::Sell => self.asks.remove(&(r.price.0, r.seq)),
        };
        Some(r.price)
    }

    /// Replaces the trader's resting quote with a new one, matching it first
    /// if it crosses the spread.
    pub fn place(&mut self, trader: TraderId, side: Side, price: Price) -> Placement {
        self.cancel(trader);
        let crossing = match side {
            Side::Buy => self
                .asks
                .first_key_value()
                .filter(|((ask, _), _)| price.0 >= *ask)
                .map(|(&(ask, seq), &owner)| (Price(ask), seq, owner)),
            Side::Sell => self
                .bids
                .first_key_value()
                .filter(|((Reverse(bid), _), _)| price.0 <= *bid)
                .map(|(&(Reverse(bid), seq), &owner)| (Price(bid), seq, owner)),
        };
        if let Some((standing, seq, owner)) = crossing {
            match side {
                Side::Buy => self.asks.remove(&(standing.0, seq)),
                Side::Sell => self.bids.remove(&(Reverse(standing.0), seq)),
            };
            self.resting.remove(&owner);
            return Placement::Crossed {
                counterparty: owner,
                price: standing,
            };
        }
        self.seq += 1;
        let seq = self.seq;
        match side {
            Side::Buy => self.bids.insert((Reverse(price.0), seq), trader),
            Side::Sell => self.asks.insert((price.0, seq), trader),
        };
        self.resting.insert(trader, Resting { side, price, seq });
        Placement::Rested
    }
}
