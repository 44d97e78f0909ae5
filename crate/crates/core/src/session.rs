//! The discrete-time market loop.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::exchange::{Assignment, Exchange, MatchResult, Price, Side, Trade, TraderId};
use crate::przi::{BuyerFloorPolicy, LutCache};
use crate::traders::{StrategySpec, Trader, TraderContext};

/// Simulated time as a whole number of fixed steps.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SessionClock {
    step: u64,
    dt: f64,
    duration: f64,
}

impl SessionClock {
    pub fn new(dt: f64, duration: f64) -> Self {
        assert!(dt > 0.0, "timestep must be positive");
        Self {
            step: 0,
            dt,
            duration,
        }
    }

    /// Seconds since the start.
    pub fn t(&self) -> f64 {
        self.step as f64 * self.dt
    }

    pub fn dt(&self) -> f64 {
        self.dt
    }

    pub fn steps(&self) -> u64 {
        self.step
    }

    pub fn duration(&self) -> f64 {
        self.duration
    }

    /// Number of steps in the whole session.
    pub fn total_steps(&self) -> u64 {
        (self.duration / self.dt).round() as u64
    }

    pub fn finished(&self) -> bool {
        self.step >= self.total_steps()
    }

    fn advance(&mut self) {
        self.step += 1;
    }
}

/// Market-wide session parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SessionParams {
    pub max_price: Price,
    pub dt: f64,
    pub duration: f64,
    pub seed: u64,
    pub buyer_floor: BuyerFloorPolicy,
}

impl Default for SessionParams {
    fn default() -> Self {
        Self {
            max_price: Price(500),
            dt: 1.0 / 60.0,
            duration: 3600.0,
            seed: 0,
            buyer_floor: BuyerFloorPolicy::ZicStyle,
        }
    }
}

/// A single deterministic market session.
///
/// Each step advances the clock, picks one trader uniformly at random and
/// routes its quote through the exchange. Counterparties of a trade are
/// immediately reissued their limit prices.
pub struct Session {
    params: SessionParams,
    clock: SessionClock,
    exchange: Exchange,
    traders: Vec<Trader>,
    limits: Vec<Price>,
    rivals: [Vec<usize>; 2],
    rng: ChaCha8Rng,
    cache: Arc<LutCache>,
    buyer_profit: i64,
    seller_profit: i64,
    trade_count: u64,
}

fn side_slot(side: Side) -> usize {
    match side {
        Side::Buy => 0,
        Side::Sell => 1,
    }
}

impl Session {
    pub fn new(params: SessionParams, cache: Arc<LutCache>) -> Self {
        Self {
            params,
            clock: SessionClock::new(params.dt, params.duration),
            exchange: Exchange::new(params.max_price),
            traders: Vec::new(),
            limits: Vec::new(),
            rivals: [Vec::new(), Vec::new()],
            rng: ChaCha8Rng::seed_from_u64(params.seed),
            cache,
            buyer_profit: 0,
            seller_profit: 0,
            trade_count: 0,
        }
    }

    /// Adds a trader with its own RNG stream and returns its id.
    pub fn add_trader(&mut self, side: Side, limit: Price, spec: StrategySpec) -> Result<TraderId> {
        let id = self.traders.len() as TraderId;
        let mut rng = ChaCha8Rng::seed_from_u64(self.params.seed);
        rng.set_stream(u64::from(id) + 1);
        let ctx = TraderContext {
            max_price: self.params.max_price,
            buyer_floor: self.params.buyer_floor,
            start_time: self.clock.t(),
        };
        let trader = Trader::new(id, side, limit, spec, ctx, rng)?;
        if trader.tracks_rivals() {
            self.rivals[side_slot(side)].push(id as usize);
        }
        self.exchange.assign(Assignment { trader: id, side, limit });
        self.traders.push(trader);
        self.limits.push(limit);
        Ok(id)
    }

    pub fn params(&self) -> &SessionParams {
        &self.params
    }

    pub fn clock(&self) -> &SessionClock {
        &self.clock
    }

    pub fn exchange(&self) -> &Exchange {
        &self.exchange
    }

    pub fn traders(&self) -> &[Trader] {
        &self.traders
    }

    pub fn cache(&self) -> &Arc<LutCache> {
        &self.cache
    }

    pub fn buyer_profit(&self) -> i64 {
        self.buyer_profit
    }

    pub fn seller_profit(&self) -> i64 {
        self.seller_profit
    }

    pub fn total_profit(&self) -> i64 {
        self.buyer_profit + self.seller_profit
    }

    pub fn trade_count(&self) -> u64 {
        self.trade_count
    }

    /// Each trader's recorded strategy value, in id order.
    pub fn strategy_vector(&self) -> Vec<f64> {
        self.traders.iter().map(|t| t.recorded_strategy().get()).collect()
    }

    /// One step. Returns the trade, if the quote crossed.
    pub fn step(&mut self) -> Option<Trade> {
        self.clock.advance();
        if self.traders.is_empty() {
            return None;
        }
        let now = self.clock.t();
        let idx = self.rng.random_range(0..self.traders.len());
        let trader = &mut self.traders[idx];
        trader.tick(now);
        let quote = trader.quote(now, self.exchange.book(), &self.cache);
        let result = self
            .exchange
            .submit_quote(&quote)
            .expect("traders only quote inside [1, max_price] on their assigned side");
        match result {
            MatchResult::Rested => {
                for &j in &self.rivals[side_slot(quote.side)] {
                    if j != idx {
                        self.traders[j].observe_rival(quote.price);
                    }
                }
                None
            }
            MatchResult::Trade(trade) => {
                self.settle(&trade, now);
                Some(trade)
            }
        }
    }

    fn settle(&mut self, trade: &Trade, now: f64) {
        self.buyer_profit += trade.buyer_surplus;
        self.seller_profit += trade.seller_surplus;
        self.trade_count += 1;
        for (id, surplus) in [(trade.buyer, trade.buyer_surplus), (trade.seller, trade.seller_surplus)] {
            let i = id as usize;
            self.traders[i].on_trade(surplus, now);
            let limit = self.limits[i];
            self.traders[i].reassign(limit);
            let side = self.traders[i].side();
            self.exchange.assign(Assignment { trader: id, side, limit });
        }
    }

    /// Runs `steps` steps, passing every trade to `on_trade`.
    pub fn run_steps(&mut self, steps: u64, mut on_trade: impl FnMut(&Trade)) {
        for _ in 0..steps {
            if let Some(trade) = self.step() {
                on_trade(&trade);
            }
        }
    }

    /// Runs to the end of the configured duration.
    pub fn run_to_end(&mut self, on_trade: impl FnMut(&Trade)) {
        let remaining = self.clock.total_steps().saturating_sub(self.clock.steps());
        self.run_steps(remaining, on_trade);
    }
}
