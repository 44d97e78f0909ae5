use std::collections::HashMap;

use super::book::{OrderBook, Placement};
use super::{Assignment, Price, Quote, Side, Trade, TraderId};
use crate::error::{Error, Result};

/// Result of submitting a quote to the exchange.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum MatchResult {
    Trade(Trade),
    Rested,
}

/// The order book together with the limit-price assignments it validates
/// quotes against.
#[derive(Clone, Debug)]
pub struct Exchange {
    book: OrderBook,
    assignments: HashMap<TraderId, Assignment>,
    max_price: Price,
}

impl Exchange {
    pub fn new(max_price: Price) -> Self {
        Self {
            book: OrderBook::new(),
            assignments: HashMap::new(),
            max_price,
        }
    }

    pub fn book(&self) -> &OrderBook {
        &self.book
    }

    pub fn max_price(&self) -> Price {
        self.max_price
    }

    pub fn assignment(&self, trader: TraderId) -> Option<&Assignment> {
        self.assignments.get(&trader)
    }

    pub fn assign(&mut self, assignment: Assignment) {
        self.assignments.insert(assignment.trader, assignment);
    }

    /// Routes a quote through the book. A crossing quote trades at the
    /// standing quote's price; otherwise it replaces the trader's resting quote.
    pub fn submit_quote(&mut self, quote: &Quote) -> Result<MatchResult> {
        let own = *self
            .assignments
            .get(&quote.trader)
            .ok_or(Error::NoAssignment(quote.trader))?;
        if own.side != quote.side {
            return Err(Error::WrongSide {
                trader: quote.trader,
                assigned: own.side,
                quoted: quote.side,
            });
        }
        if quote.price < Price::TICK || quote.price > self.max_price {
            return Err(Error::PriceOutOfRange {
                price: quote.price,
                max: self.max_price,
            });
        }
        match self.book.place(quote.trader, quote.side, quote.price) {
            Placement::Rested => Ok(MatchResult::Rested),
            Placement::Crossed {
                counterparty,
                price,
            } => {
                let other = self
                    .assignments
                    .get(&counterparty)
                    .ok_or(Error::NoAssignment(counterparty))?;
                let (buyer, seller) = match quote.side {
                    Side::Buy => (own, *other),
                    Side::Sell => (*other, own),
                };
                Ok(MatchResult::Trade(Trade {
                    time: quote.time,
                    price,
                    buyer: buyer.trader,
                    seller: seller.trader,
                    buyer_surplus: i64::from(buyer.limit.0) - i64::from(price.0),
                    seller_surplus: i64::from(price.0) - i64::from(seller.limit.0),
                }))
            }
        }
    }
}

/// Surplus the assigned trader earns from `trade`: `limit - price` for a
/// buyer, `price - limit` for a seller.
pub fn surplus_of(trade: &Trade, assignment: &Assignment) -> i64 {
    let price = i64::from(trade.price.0);
    let limit = i64::from(assignment.limit.0);
    match assignment.side {
        Side::Buy => limit - price,
        Side::Sell => price - limit,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn exchange_with(assignments: &[(TraderId, Side, u32)]) -> Exchange {
        let mut ex = Exchange::new(Price(500));
        for &(trader, side, limit) in assignments {
            ex.assign(Assignment {
                trader,
                side,
                limit: Price(limit),
            });
        }
        ex
    }

    fn quote(trader: TraderId, side: Side, price: u32) -> Quote {
        Quote {
            trader,
            side,
            price: Price(price),
            time: 0.0,
        }
    }

    #[test]
    fn bid_crossing_standing_ask_trades_at_ask() {
        let mut ex = exchange_with(&[(1, Side::Sell, 5), (2, Side::Buy, 10)]);
        assert_eq!(ex.submit_quote(&quote(1, Side::Sell, 7)).unwrap(), MatchResult::Rested);
        let MatchResult::Trade(t) = ex.submit_quote(&quote(2, Side::Buy, 10)).unwrap() else {
            panic!("expected a trade");
        };
        assert_eq!(t.price, Price(7));
        assert_eq!(t.buyer_surplus, 3);
        assert_eq!(t.seller_surplus, 2);
        assert_eq!(ex.book().best_ask(), None);
    }

    #[test]
    fn non_crossing_bid_rests() {
        let mut ex = exchange_with(&[(1, Side::Sell, 5), (2, Side::Buy, 10)]);
        ex.submit_quote(&quote(1, Side::Sell, 7)).unwrap();
        assert_eq!(ex.submit_quote(&quote(2, Side::Buy, 5)).unwrap(), MatchResult::Rested);
        assert_eq!(ex.book().best_bid(), Some(Price(5)));
    }

    #[test]
    fn ask_crossing_standing_bid_trades_at_bid() {
        let mut ex = exchange_with(&[(1, Side::Buy, 12), (2, Side::Sell, 4)]);
        ex.submit_quote(&quote(1, Side::Buy, 9)).unwrap();
        let MatchResult::Trade(t) = ex.submit_quote(&quote(2, Side::Sell, 6)).unwrap() else {
            panic!("expected a trade");
        };
        assert_eq!(t.price, Price(9));
        assert_eq!((t.buyer, t.seller), (1, 2));
        assert_eq!((t.buyer_surplus, t.seller_surplus), (3, 5));
    }

    #[test]
    fn rejects_unassigned_and_out_of_range_quotes() {
        let mut ex = exchange_with(&[(1, Side::Buy, 10)]);
        assert!(matches!(
            ex.submit_quote(&quote(9, Side::Buy, 5)),
            Err(Error::NoAssignment(9))
        ));
        assert!(matches!(
            ex.submit_quote(&quote(1, Side::Buy, 0)),
            Err(Error::PriceOutOfRange { .. })
        ));
        assert!(matches!(
            ex.submit_quote(&quote(1, Side::Buy, 501)),
            Err(Error::PriceOutOfRange { .. })
        ));
        assert!(matches!(
            ex.submit_quote(&quote(1, Side::Sell, 5)),
            Err(Error::WrongSide { .. })
        ));
    }

    #[test]
    fn surplus_examples() {
        let trade = |price| Trade {
            time: 0.0,
            price: Price(price),
            buyer: 0,
            seller: 1,
            buyer_surplus: 0,
            seller_surplus: 0,
        };
        let seller = Assignment { trader: 1, side: Side::Sell, limit: Price(10) };
        let buyer = Assignment { trader: 0, side: Side::Buy, limit: Price(10) };
        assert_eq!(surplus_of(&trade(15), &seller), 5);
        assert_eq!(surplus_of(&trade(8), &buyer), 2);
        assert_eq!(surplus_of(&trade(10), &buyer), 0);
        assert_eq!(surplus_of(&trade(10), &seller), 0);
    }
}
