//! Traders and their quote rules.
//!
//! A [`Trader`] owns its assignment, profit tally and private RNG stream, and
//! dispatches to one quote rule chosen by its [`StrategySpec`].

mod zi;

use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

pub use zi::{gvwy_price, shvr_price, zic_price, ziu_price, ShaverSeeds};

use crate::error::{Error, Result};
use crate::exchange::{OrderBook, Price, Quote, Side, TraderId};
use crate::prsh::{CycleReport, PrshConfig, PrshState};
use crate::przi::{BoundEstimator, BuyerFloorPolicy, EstimatorEvent, LutCache, LutKey, PrziDistribution, StrategyValue};
use crate::sensitivity::{book_imbalance, ImpactFunction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum StrategyKind {
    Ziu,
    Zic,
    Gvwy,
    Shvr,
    Przi,
    Prsh,
    Iprzi,
}

impl fmt::Display for StrategyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let name = match self {
            StrategyKind::Ziu => "ZIU",
            StrategyKind::Zic => "ZIC",
            StrategyKind::Gvwy => "GVWY",
            StrategyKind::Shvr => "SHVR",
            StrategyKind::Przi => "PRZI",
            StrategyKind::Prsh => "PRSH",
            StrategyKind::Iprzi => "IPRZI",
        };
        f.write_str(name)
    }
}

/// Strategy choice plus its parameters, as written in config files.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum StrategySpec {
    Ziu,
    Zic,
    Gvwy,
    Shvr {
        #[serde(default)]
        seed_low: Option<Price>,
        #[serde(default)]
        seed_high: Option<Price>,
    },
    Przi {
        s: f64,
    },
    Prsh(PrshConfig),
    Iprzi {
        #[serde(default)]
        impact: ImpactFunction,
    },
}

impl StrategySpec {
    pub fn kind(&self) -> StrategyKind {
        match self {
            StrategySpec::Ziu => StrategyKind::Ziu,
            StrategySpec::Zic => StrategyKind::Zic,
            StrategySpec::Gvwy => StrategyKind::Gvwy,
            StrategySpec::Shvr { .. } => StrategyKind::Shvr,
            StrategySpec::Przi { .. } => StrategyKind::Przi,
            StrategySpec::Prsh(_) => StrategyKind::Prsh,
            StrategySpec::Iprzi { .. } => StrategyKind::Iprzi,
        }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            StrategySpec::Przi { s } => StrategyValue::new(*s).map(|_| ()),
            StrategySpec::Prsh(config) => config.validate(),
            StrategySpec::Iprzi { impact } => ImpactFunction::new(impact.gain).map(|_| ()),
            _ => Ok(()),
        }
    }
}

/// PRZI sampling state: bound estimator plus the last table used.
#[derive(Clone, Debug)]
pub struct PrziQuoter {
    estimator: BoundEstimator,
    memo: Option<(LutKey, Arc<PrziDistribution>)>,
}

impl PrziQuoter {
    pub fn new(estimator: BoundEstimator) -> Self {
        Self { estimator, memo: None }
    }

    pub fn estimator(&self) -> &BoundEstimator {
        &self.estimator
    }

    pub fn observe(&mut self, event: EstimatorEvent) {
        self.estimator.observe(event);
    }

    /// The distribution for `s` against the current book.
    pub fn distribution(
        &mut self,
        s: StrategyValue,
        limit: Price,
        book: &OrderBook,
        cache: &LutCache,
    ) -> Arc<PrziDistribution> {
        let bounds = self
            .estimator
            .bounds(s, limit, book.best_bid(), book.best_ask())
            .expect("estimator sees the assignment at construction");
        let key = LutKey::new(s, bounds, self.estimator.side());
        match &self.memo {
            Some((k, dist)) if *k == key => Arc::clone(dist),
            _ => {
                let dist = cache.get_or_build(key);
                self.memo = Some((key, Arc::clone(&dist)));
                dist
            }
        }
    }

    pub fn price<R: Rng + ?Sized>(
        &mut self,
        s: StrategyValue,
        limit: Price,
        book: &OrderBook,
        cache: &LutCache,
        rng: &mut R,
    ) -> Price {
        self.distribution(s, limit, book, cache).sample(rng.random::<f64>())
    }
}

#[derive(Clone, Debug)]
enum Rule {
    Ziu,
    Zic,
    Gvwy,
    Shvr(ShaverSeeds),
    Przi(PrziQuoter, StrategyValue),
    Prsh(PrziQuoter, Box<PrshState>),
    Iprzi(PrziQuoter, ImpactFunction, StrategyValue),
}

/// Market-wide settings every trader needs at construction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraderContext {
    pub max_price: Price,
    pub buyer_floor: BuyerFloorPolicy,
    /// Simulated time the trader joins, for evaluation windows.
    pub start_time: f64,
}

/// One market participant with a fixed side and limit price.
#[derive(Clone, Debug)]
pub struct Trader {
    id: TraderId,
    side: Side,
    limit: Price,
    max_price: Price,
    profit: i64,
    trades: u64,
    rng: ChaCha8Rng,
    kind: StrategyKind,
    rule: Rule,
}

impl Trader {
    /// Builds a trader. Limits outside `[1, max_price]` are rejected, which
    /// covers a seller limit the ZIC range could not reach.
    pub fn new(
        id: TraderId,
        side: Side,
        limit: Price,
        spec: StrategySpec,
        ctx: TraderContext,
        mut rng: ChaCha8Rng,
    ) -> Result<Self> {
        spec.validate()?;
        if limit.0 < 1 || limit > ctx.max_price {
            return Err(Error::Config(format!(
                "trader {id}: limit {limit} outside [1, {}]",
                ctx.max_price
            )));
        }
        let mut quoter = || {
            let c = BoundEstimator::draw_coefficient(&mut rng);
            let mut est = BoundEstimator::new(side, c, ctx.buyer_floor, ctx.max_price);
            est.observe(EstimatorEvent::Assigned(limit));
            PrziQuoter::new(est)
        };
        let rule = match spec {
            StrategySpec::Ziu => Rule::Ziu,
            StrategySpec::Zic => Rule::Zic,
            StrategySpec::Gvwy => Rule::Gvwy,
            StrategySpec::Shvr { seed_low, seed_high } => {
                let d = ShaverSeeds::defaults(ctx.max_price);
                Rule::Shvr(ShaverSeeds {
                    low: seed_low.unwrap_or(d.low),
                    high: seed_high.unwrap_or(d.high),
                })
            }
            StrategySpec::Przi { s } => Rule::Przi(quoter(), StrategyValue::new(s)?),
            StrategySpec::Prsh(config) => {
                let q = quoter();
                let state = PrshState::new(config, ctx.start_time, &mut rng)?;
                Rule::Prsh(q, Box::new(state))
            }
            StrategySpec::Iprzi { impact } => Rule::Iprzi(quoter(), impact, StrategyValue::ZIC),
        };
        Ok(Self {
            id,
            side,
            limit,
            max_price: ctx.max_price,
            profit: 0,
            trades: 0,
            rng,
            kind: spec.kind(),
            rule,
        })
    }

    pub fn id(&self) -> TraderId {
        self.id
    }

    pub fn side(&self) -> Side {
        self.side
    }

    pub fn limit(&self) -> Price {
        self.limit
    }

    pub fn kind(&self) -> StrategyKind {
        self.kind
    }

    pub fn profit(&self) -> i64 {
        self.profit
    }

    pub fn trade_count(&self) -> u64 {
        self.trades
    }

    /// True for the PRZI family, whose price range reacts to rival quotes.
    pub fn tracks_rivals(&self) -> bool {
        matches!(self.rule, Rule::Przi(..) | Rule::Prsh(..) | Rule::Iprzi(..))
    }

    pub fn prsh(&self) -> Option<&PrshState> {
        match &self.rule {
            Rule::Prsh(_, state) => Some(state),
            _ => None,
        }
    }

    /// Strategy value currently used to quote. Fixed strategies report their
    /// anchor (`ZIU` and `ZIC` both as 0).
    pub fn active_strategy(&self) -> StrategyValue {
        match &self.rule {
            Rule::Ziu | Rule::Zic => StrategyValue::ZIC,
            Rule::Gvwy => StrategyValue::GVWY,
            Rule::Shvr(_) => StrategyValue::SHVR,
            Rule::Przi(_, s) | Rule::Iprzi(_, _, s) => *s,
            Rule::Prsh(_, state) => state.active(),
        }
    }

    /// Strategy value recorded in strategy trajectories: the elite for
    /// hill climbers, the active value otherwise.
    pub fn recorded_strategy(&self) -> StrategyValue {
        match &self.rule {
            Rule::Prsh(_, state) => state.elite(),
            _ => self.active_strategy(),
        }
    }

    /// Lets a hill climber close its evaluation window.
    pub fn tick(&mut self, now: f64) -> Option<CycleReport> {
        match &mut self.rule {
            Rule::Prsh(_, state) => state.advance(now, &mut self.rng),
            _ => None,
        }
    }

    /// Quote for the current book.
    pub fn quote(&mut self, time: f64, book: &OrderBook, cache: &LutCache) -> Quote {
        let (side, limit) = (self.side, self.limit);
        let price = match &mut self.rule {
            Rule::Ziu => ziu_price(&mut self.rng, self.max_price),
            Rule::Zic => zic_price(&mut self.rng, side, limit, self.max_price),
            Rule::Gvwy => gvwy_price(limit),
            Rule::Shvr(seeds) => shvr_price(side, limit, book.best_bid(), book.best_ask(), *seeds),
            Rule::Przi(q, s) => q.price(*s, limit, book, cache, &mut self.rng),
            Rule::Prsh(q, state) => q.price(state.active(), limit, book, cache, &mut self.rng),
            Rule::Iprzi(q, impact, s) => {
                *s = book_imbalance(book).map_or(StrategyValue::ZIC, |d| impact.to_strategy(d, side));
                q.price(*s, limit, book, cache, &mut self.rng)
            }
        };
        Quote {
            trader: self.id,
            side,
            price,
            time,
        }
    }

    /// Books a trade's surplus. Hill climbers first close any expired window
    /// so the profit lands on the strategy that earned it.
    pub fn on_trade(&mut self, surplus: i64, now: f64) -> Option<CycleReport> {
        self.profit += surplus;
        self.trades += 1;
        match &mut self.rule {
            Rule::Prsh(_, state) => {
                let report = state.advance(now, &mut self.rng);
                state.record_profit(surplus);
                report
            }
            _ => None,
        }
    }

    /// Issues a fresh limit price.
    pub fn reassign(&mut self, limit: Price) {
        self.limit = limit;
        if let Some(q) = self.quoter_mut() {
            q.observe(EstimatorEvent::Assigned(limit));
        }
    }

    /// A same-side rival quote became visible.
    pub fn observe_rival(&mut self, price: Price) {
        if let Some(q) = self.quoter_mut() {
            q.observe(EstimatorEvent::RivalQuote(price));
        }
    }

    pub fn quoter(&self) -> Option<&PrziQuoter> {
        match &self.rule {
            Rule::Przi(q, _) | Rule::Prsh(q, _) | Rule::Iprzi(q, _, _) => Some(q),
            _ => None,
        }
    }

    fn quoter_mut(&mut self) -> Option<&mut PrziQuoter> {
        match &mut self.rule {
            Rule::Przi(q, _) | Rule::Prsh(q, _) | Rule::Iprzi(q, _, _) => Some(q),
            _ => None,
        }
    }
}
