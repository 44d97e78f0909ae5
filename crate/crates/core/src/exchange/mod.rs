//! Exchange core: prices, quotes, the order book and the matcher.

mod book;
mod matcher;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use book::{OrderBook, Placement, TopOfBook};
pub use matcher::{surplus_of, Exchange, MatchResult};

/// Identifier of a trader within one session.
pub type TraderId = u32;

/// A price as an integer number of ticks.
///
/// Every quotable price is at least one tick. The exchange rejects quotes
/// outside `[1, max_price]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Price(pub u32);

impl Price {
    /// The tick size, which is also the smallest quotable price.
    pub const TICK: Price = Price(1);

    pub fn ticks(self) -> u32 {
        self.0
    }

    pub fn as_f64(self) -> f64 {
        f64::from(self.0)
    }

    /// One tick higher.
    pub fn up(self) -> Price {
        Price(self.0.saturating_add(1))
    }

    /// One tick lower, never below zero.
    pub fn down(self) -> Price {
        Price(self.0.saturating_sub(1))
    }
}

impl fmt::Display for Price {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Direction of a trader, and the side of the book its quotes rest on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    /// Buyers quote bids.
    #[serde(alias = "buyer", alias = "bid")]
    Buy,
    /// Sellers quote asks.
    #[serde(alias = "seller", alias = "ask")]
    Sell,
}

impl Side {
    pub fn opposite(self) -> Side {
        match self {
            Side::Buy => Side::Sell,
            Side::Sell => Side::Buy,
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Side::Buy => "buyer",
            Side::Sell => "seller",
        }
    }
}

/// A single-unit quote.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quote {
    pub trader: TraderId,
    pub side: Side,
    pub price: Price,
    /// Simulated seconds.
    pub time: f64,
}

/// A matched transaction of one unit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Trade {
    pub time: f64,
    pub price: Price,
    pub buyer: TraderId,
    pub seller: TraderId,
    /// `limit_buyer - price`, in ticks.
    pub buyer_surplus: i64,
    /// `price - limit_seller`, in ticks.
    pub seller_surplus: i64,
}

impl Trade {
    pub fn total_surplus(&self) -> i64 {
        self.buyer_surplus + self.seller_surplus
    }
}

/// A trader's current direction and private limit price.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Assignment {
    pub trader: TraderId,
    pub side: Side,
    pub limit: Price,
}
