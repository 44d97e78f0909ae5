//! Continuous double auction market simulation with zero-intelligence traders.
//!
//! The crate is organised bottom-up:
//!
//! - [`exchange`]: prices, quotes, the one-quote-per-trader order book and the
//!   spread-crossing matcher, limit-price assignments and surplus accounting.
//! - [`traders`]: the trader abstraction and the fixed ZIU / ZIC / GVWY / SHVR
//!   quote rules, plus the adaptive and imbalance-sensitive PRZI variants.
//! - [`przi`]: the strategy-parameterised quote-price distribution, its
//!   lookup tables, the dynamic price-bound heuristics and the shared LUT cache.
//! - [`prsh`]: the k-strategy evaluate / rank / mutate hill climber.
//! - [`sensitivity`]: micro-price, top-of-book imbalance and the impact and
//!   opinion mappings onto strategy values.
//! - [`session`]: the discrete-time market loop tying all of the above together.
//! - [`rqa`]: recurrence plots and trapping-time analysis of strategy
//!   trajectories.
//! - [`experiment`]: configuration files, the landscape / session / impact
//!   experiment runners, metrics and CSV outputs.
//!
//! Prices are integer tick counts throughout; the tick size is one.

// `!(x > 0.0)` style guards are used on purpose so NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod error;
pub mod exchange;
pub mod experiment;
pub mod prsh;
pub mod przi;
pub mod rqa;
pub mod sensitivity;
pub mod session;
pub mod traders;

pub use error::{Error, Result};
pub use exchange::{Assignment, Exchange, MatchResult, OrderBook, Price, Quote, Side, Trade, TraderId};
pub use przi::{LutCache, PriceBounds, PrziDistribution, StrategyValue};
pub use session::{Session, SessionClock};
