//! Experiment runners: market sessions, fitness landscapes and the
//! scripted imbalance scenario.

use std::io::Write;
use std::path::Path;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::config::{ExperimentConfig, ImpactConfig, Population};
use super::metrics::{self, moving_average, smith_alpha};
use crate::error::{Error, Result};
use crate::exchange::{OrderBook, Price, Side, Trade, TraderId};
use crate::prsh::{Genesis, PrshConfig};
use crate::przi::{BuyerFloorPolicy, LutCache};
use crate::sensitivity::{book_imbalance, ImpactFunction};
use crate::session::Session;
use crate::traders::{StrategyKind, StrategySpec, Trader, TraderContext};

/// Seed of session `index` under `master` (splitmix64 of the pair).
pub fn derive_seed(master: u64, index: u64) -> u64 {
    let mut z = master ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Builds a session with every configured population, in file order.
pub fn build_session(config: &ExperimentConfig, seed: u64, cache: Arc<LutCache>) -> Result<Session> {
    build_with(config, &config.population, seed, cache)
}

fn build_with(config: &ExperimentConfig, populations: &[Population], seed: u64, cache: Arc<LutCache>) -> Result<Session> {
    let mut session = Session::new(config.market.session_params(seed), cache);
    for pop in populations {
        let limit = config.market.schedule.limit(pop.side);
        for _ in 0..pop.count {
            session.add_trader(pop.side, limit, pop.strategy)?;
        }
    }
    Ok(session)
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TraderInfo {
    pub id: TraderId,
    pub side: Side,
    pub kind: StrategyKind,
}

/// State of the market at one sampling instant.
#[derive(Clone, Debug, PartialEq)]
pub struct Sample {
    pub time_s: f64,
    pub trades: u64,
    pub buyer_profit: i64,
    pub seller_profit: i64,
    /// Smith's alpha over the trades since the previous sample.
    pub alpha: Option<f64>,
    pub strategies: Vec<f64>,
}

impl Sample {
    pub fn total_profit(&self) -> i64 {
        self.buyer_profit + self.seller_profit
    }
}

/// A hill climber's state at a sampling instant.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct StrategyLogRow {
    pub time_s: f64,
    pub trader: TraderId,
    pub active: f64,
    pub elite: f64,
    pub pps: Option<f64>,
}

/// Everything recorded from one session.
#[derive(Clone, Debug, PartialEq)]
pub struct SessionRecord {
    pub seed: u64,
    pub traders: Vec<TraderInfo>,
    pub samples: Vec<Sample>,
    /// Trailing-mean strategy per sample, per trader.
    pub smoothed: Vec<Vec<f64>>,
    pub strategy_log: Vec<StrategyLogRow>,
    pub trade_count: u64,
    pub buyer_profit: i64,
    pub seller_profit: i64,
    pub alpha: Option<f64>,
}

impl SessionRecord {
    pub fn total_profit(&self) -> i64 {
        self.buyer_profit + self.seller_profit
    }

    /// Final smoothed strategy of every hill climber, or of every trader
    /// when there are none.
    pub fn terminal_strategies(&self) -> Vec<(TraderInfo, f64)> {
        let Some(last) = self.smoothed.last() else {
            return Vec::new();
        };
        let any_prsh = self.traders.iter().any(|t| t.kind == StrategyKind::Prsh);
        self.traders
            .iter()
            .filter(|t| !any_prsh || t.kind == StrategyKind::Prsh)
            .map(|t| (*t, last[t.id as usize]))
            .collect()
    }

    /// Share of terminal strategies below zero.
    pub fn relaxed_fraction(&self) -> Option<f64> {
        let terminal = self.terminal_strategies();
        (!terminal.is_empty())
            .then(|| terminal.iter().filter(|(_, s)| *s < 0.0).count() as f64 / terminal.len() as f64)
    }

    /// Total profit gained per sample interval over the last `window_s`
    /// seconds: mean and standard deviation.
    pub fn final_window_profit(&self, window_s: Option<f64>) -> Option<(f64, f64)> {
        let end = self.samples.last()?.time_s;
        let start = window_s.map_or(f64::NEG_INFINITY, |w| end - w);
        let mut prev = 0;
        let mut gains = Vec::new();
        for s in &self.samples {
            if s.time_s > start {
                gains.push((s.total_profit() - prev) as f64);
            }
            prev = s.total_profit();
        }
        Some((metrics::mean(&gains)?, metrics::std_dev(&gains)?))
    }
}

/// Runs one session, streaming the trade tape to `tape` when given.
pub fn run_session_once(
    config: &ExperimentConfig,
    seed: u64,
    cache: Arc<LutCache>,
    mut tape: Option<&mut dyn Write>,
) -> Result<SessionRecord> {
    config.validate_market()?;
    let mut session = build_session(config, seed, cache)?;
    let traders: Vec<TraderInfo> = session
        .traders()
        .iter()
        .map(|t| TraderInfo {
            id: t.id(),
            side: t.side(),
            kind: t.kind(),
        })
        .collect();
    let p0 = config.session.p0;
    let chunk = config.market.steps_per_sample();
    let mut samples = Vec::new();
    let mut strategy_log = Vec::new();
    let (mut sq, mut n, mut sq_all, mut n_all) = (0.0, 0u64, 0.0, 0u64);
    let mut io_error = None;
    while !session.clock().finished() {
        let remaining = session.clock().total_steps() - session.clock().steps();
        session.run_steps(chunk.min(remaining), |t: &Trade| {
            if let Some(p0) = p0 {
                let d = t.price.as_f64() - p0;
                sq += d * d;
                n += 1;
            }
            if let Some(w) = tape.as_deref_mut() {
                if let Err(e) = write_trade(w, t) {
                    io_error.get_or_insert(e);
                }
            }
        });
        if let Some(e) = io_error.take() {
            return Err(e.into());
        }
        let time_s = session.clock().t();
        let alpha = p0.filter(|_| n > 0).map(|p0| 100.0 * (sq / n as f64).sqrt() / p0);
        sq_all += sq;
        n_all += n;
        (sq, n) = (0.0, 0);
        for t in session.traders() {
            if let Some(state) = t.prsh() {
                strategy_log.push(StrategyLogRow {
                    time_s,
                    trader: t.id(),
                    active: state.active().get(),
                    elite: state.elite().get(),
                    pps: state.last_elite_pps(),
                });
            }
        }
        samples.push(Sample {
            time_s,
            trades: session.trade_count(),
            buyer_profit: session.buyer_profit(),
            seller_profit: session.seller_profit(),
            alpha,
            strategies: session.strategy_vector(),
        });
    }
    let window = config.market.smoothing_samples();
    let columns: Vec<Vec<f64>> = (0..traders.len())
        .map(|i| moving_average(&samples.iter().map(|s| s.strategies[i]).collect::<Vec<_>>(), window))
        .collect();
    let smoothed = (0..samples.len())
        .map(|k| columns.iter().map(|c| c[k]).collect())
        .collect();
    Ok(SessionRecord {
        seed,
        traders,
        samples,
        smoothed,
        strategy_log,
        trade_count: session.trade_count(),
        buyer_profit: session.buyer_profit(),
        seller_profit: session.seller_profit(),
        alpha: p0.filter(|_| n_all > 0).map(|p0| 100.0 * (sq_all / n_all as f64).sqrt() / p0),
    })
}

fn write_trade(out: &mut dyn Write, t: &Trade) -> std::io::Result<()> {
    writeln!(
        out,
        "{},{},{},{},{},{}",
        t.time, t.price, t.buyer, t.seller, t.buyer_surplus, t.seller_surplus
    )
}

pub const TRADE_HEADER: &str = "time_s,price,buyer_id,seller_id,buyer_surplus,seller_surplus";

/// Output directory of repetition `i`: `out` itself for a single
/// repetition, `out/rep_<i>` otherwise.
pub fn rep_dir(out: &Path, reps: u32, i: u32) -> std::path::PathBuf {
    if reps == 1 {
        out.to_path_buf()
    } else {
        out.join(format!("rep_{i:02}"))
    }
}

/// Runs every repetition of a session experiment in parallel. Repetition
/// `i` uses seed `derive_seed(config.seed, i)`; when `out_dir` is given each
/// writes its trade tape to `trades.csv` in its [`rep_dir`].
pub fn run_repetitions(config: &ExperimentConfig, out_dir: Option<&Path>) -> Result<Vec<SessionRecord>> {
    config.validate_market()?;
    let cache = Arc::new(LutCache::new());
    let reps = config.session.repetitions;
    (0..reps)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, u64::from(i));
            let cache = Arc::clone(&cache);
            match out_dir.filter(|_| config.session.write_trades) {
                Some(out) => {
                    let dir = rep_dir(out, reps, i);
                    std::fs::create_dir_all(&dir)?;
                    let file = std::fs::File::create(dir.join("trades.csv"))?;
                    let mut w = std::io::BufWriter::new(file);
                    writeln!(w, "{TRADE_HEADER}")?;
                    let record = run_session_once(config, seed, cache, Some(&mut w))?;
                    w.flush()?;
                    Ok(record)
                }
                None => run_session_once(config, seed, cache, None),
            }
        })
        .collect()
}

/// Mean profit per second of each grid strategy.
#[derive(Clone, Debug, PartialEq)]
pub struct Landscape {
    pub strategies: Vec<f64>,
    /// `pps[seed][point]`.
    pub pps: Vec<Vec<f64>>,
}

impl Landscape {
    pub fn mean_pps(&self) -> Vec<f64> {
        (0..self.strategies.len())
            .map(|j| metrics::mean(&self.pps.iter().map(|r| r[j]).collect::<Vec<_>>()).unwrap_or(0.0))
            .collect()
    }

    pub fn std_pps(&self) -> Vec<f64> {
        (0..self.strategies.len())
            .map(|j| metrics::std_dev(&self.pps.iter().map(|r| r[j]).collect::<Vec<_>>()).unwrap_or(0.0))
            .collect()
    }
}

/// Evaluates a regular strategy grid for the single hill-climbing trader.
///
/// The hill climber is replaced by one holding the whole grid, each point
/// trading for one evaluation period in turn against the fixed population;
/// the first completed cycle's scores are the landscape.
pub fn run_landscape(config: &ExperimentConfig) -> Result<Landscape> {
    let land = config.landscape.clone().unwrap_or_default();
    let k = land.grid_points()?;
    if config.prsh_count() != 1 {
        return Err(Error::Config(format!(
            "a landscape needs exactly one hill-climbing trader, found {}",
            config.prsh_count()
        )));
    }
    if land.seeds == 0 {
        return Err(Error::Config("landscape seeds must be at least 1".into()));
    }
    let mut populations = config.population.clone();
    for pop in &mut populations {
        if pop.strategy.kind() == StrategyKind::Prsh {
            pop.strategy = StrategySpec::Prsh(PrshConfig {
                k,
                eval_period_s: land.eval_period_s,
                sigma: 0.0,
                genesis: Genesis::Grid,
                ..PrshConfig::default()
            });
        }
    }
    let mut checked = config.clone();
    checked.population = populations.clone();
    checked.validate_market()?;
    let cache = Arc::new(LutCache::new());
    let pps = (0..land.seeds)
        .into_par_iter()
        .map(|i| {
            let seed = derive_seed(config.seed, u64::from(i));
            let mut session = build_with(config, &populations, seed, Arc::clone(&cache))?;
            let idx = session
                .traders()
                .iter()
                .position(|t| t.prsh().is_some())
                .expect("one hill climber was configured");
            while session.traders()[idx].prsh().unwrap().last_report().is_none() {
                session.step();
            }
            let report = session.traders()[idx].prsh().unwrap().last_report().unwrap();
            Ok(report.scores.iter().map(|s| s.pps()).collect())
        })
        .collect::<Result<Vec<Vec<f64>>>>()?;
    let strategies = (0..k).map(|i| 2.0 * i as f64 / (k - 1) as f64 - 1.0).collect();
    Ok(Landscape { strategies, pps })
}

/// Scripted change to the synthetic top of book.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BookAction {
    AddBid(u32),
    RemoveBid(u32),
    AddAsk(u32),
    RemoveAsk(u32),
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ScriptEvent {
    pub time_s: f64,
    pub action: BookAction,
}

/// Parses `time_s,event` rows such as `10.0,add_bid:3` after a header.
pub fn parse_script(text: &str, path: &Path) -> Result<Vec<ScriptEvent>> {
    let mut events = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if i == 0 || line.trim().is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse {
            path: path.display().to_string(),
            line: i + 1,
            msg,
        };
        let (time, event) = line.split_once(',').ok_or_else(|| err("expected time_s,event".into()))?;
        let time_s: f64 = time.trim().parse().map_err(|e| err(format!("{e}")))?;
        let (name, qty) = match event.trim().split_once(':') {
            Some((name, q)) => (name, q.trim().parse::<u32>().map_err(|e| err(format!("{e}")))?),
            None => (event.trim(), 1),
        };
        let action = match name {
            "add_bid" => BookAction::AddBid(qty),
            "remove_bid" => BookAction::RemoveBid(qty),
            "add_ask" => BookAction::AddAsk(qty),
            "remove_ask" => BookAction::RemoveAsk(qty),
            other => return Err(err(format!("unknown event `{other}`"))),
        };
        events.push(ScriptEvent { time_s, action });
    }
    events.sort_by(|a, b| a.time_s.total_cmp(&b.time_s));
    Ok(events)
}

/// Default script: three extra units at the best bid at t = 10 s.
pub fn default_script() -> Vec<ScriptEvent> {
    vec![ScriptEvent {
        time_s: 10.0,
        action: BookAction::AddBid(3),
    }]
}

/// One probe quote of the imbalance-sensitive buyer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ProbeQuote {
    pub time_s: f64,
    pub imbalance: Option<f64>,
    pub strategy: f64,
    pub price: Price,
}

/// Drives one imbalance-sensitive buyer against a scripted top of book.
///
/// The synthetic book starts with `bid_qty` units at `bid` and `ask_qty` at
/// `ask`; script events add or remove units at those prices. The buyer
/// quotes every `quote_interval_s` seconds. Its quotes are recorded but not
/// submitted, so the book only changes through the script.
pub fn run_impact(cfg: &ImpactConfig, events: &[ScriptEvent], seed: u64) -> Result<Vec<ProbeQuote>> {
    if !(cfg.quote_interval_s > 0.0) || cfg.bid >= cfg.ask {
        return Err(Error::Config("impact scenario needs a positive interval and bid < ask".into()));
    }
    let impact = ImpactFunction::new(cfg.gain)?;
    let max_price = Price(500).max(cfg.limit).max(cfg.ask);
    let ctx = TraderContext {
        max_price,
        buyer_floor: BuyerFloorPolicy::ZicStyle,
        start_time: 0.0,
    };
    let mut buyer = Trader::new(
        0,
        Side::Buy,
        cfg.limit,
        StrategySpec::Iprzi { impact },
        ctx,
        ChaCha8Rng::seed_from_u64(seed),
    )?;
    let cache = LutCache::new();
    let mut book = OrderBook::new();
    let mut next_id: TraderId = 1;
    let mut bids = Vec::new();
    let mut asks = Vec::new();
    let mut add = |book: &mut OrderBook, side: Side, ids: &mut Vec<TraderId>, n: u32| {
        for _ in 0..n {
            let price = if side == Side::Buy { cfg.bid } else { cfg.ask };
            book.place(next_id, side, price);
            ids.push(next_id);
            next_id += 1;
        }
    };
    let remove = |book: &mut OrderBook, ids: &mut Vec<TraderId>, n: u32| {
        for _ in 0..n {
            if let Some(id) = ids.pop() {
                book.cancel(id);
            }
        }
    };
    add(&mut book, Side::Buy, &mut bids, cfg.bid_qty);
    add(&mut book, Side::Sell, &mut asks, cfg.ask_qty);
    let steps = (cfg.duration_s / cfg.quote_interval_s).round() as u64;
    let mut pending = events.iter().peekable();
    let mut out = Vec::with_capacity(steps as usize);
    for i in 0..steps {
        let t = i as f64 * cfg.quote_interval_s;
        while let Some(ev) = pending.next_if(|e| e.time_s <= t + 1e-9) {
            match ev.action {
                BookAction::AddBid(n) => add(&mut book, Side::Buy, &mut bids, n),
                BookAction::AddAsk(n) => add(&mut book, Side::Sell, &mut asks, n),
                BookAction::RemoveBid(n) => remove(&mut book, &mut bids, n),
                BookAction::RemoveAsk(n) => remove(&mut book, &mut asks, n),
            }
        }
        let quote = buyer.quote(t, &book, &cache);
        out.push(ProbeQuote {
            time_s: t,
            imbalance: book_imbalance(&book),
            strategy: buyer.active_strategy().get(),
            price: quote.price,
        });
    }
    Ok(out)
}

/// Prices quoted in the `n` probes before and the `n` probes from `at`.
pub fn split_at_time(quotes: &[ProbeQuote], at: f64, n: usize) -> (Vec<f64>, Vec<f64>) {
    let cut = quotes.partition_point(|q| q.time_s < at - 1e-9);
    let pre = quotes[cut.saturating_sub(n)..cut].iter().map(|q| q.price.as_f64()).collect();
    let post = quotes[cut..(cut + n).min(quotes.len())].iter().map(|q| q.price.as_f64()).collect();
    (pre, post)
}

/// Per-run regression input: terminal relaxed share against late profit.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RegressionRow {
    pub run: usize,
    pub relaxed_fraction: f64,
    pub mean_profit: f64,
    pub std_profit: f64,
}

pub fn regression_rows(records: &[SessionRecord], window_s: Option<f64>) -> Vec<RegressionRow> {
    records
        .iter()
        .enumerate()
        .filter_map(|(run, r)| {
            let (mean_profit, std_profit) = r.final_window_profit(window_s)?;
            Some(RegressionRow {
                run,
                relaxed_fraction: r.relaxed_fraction()?,
                mean_profit,
                std_profit,
            })
        })
        .collect()
}

/// Smith's alpha over a finished trade list.
pub fn tape_alpha(trades: &[Trade], p0: f64) -> Option<f64> {
    smith_alpha(&trades.iter().map(|t| t.price.as_f64()).collect::<Vec<_>>(), p0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(text: &str) -> ExperimentConfig {
        ExperimentConfig::parse(text).unwrap()
    }

    const BOX_ZIC: &str = r#"
seed = 3
[market]
duration_s = 600
sample_interval_s = 60
smoothing_window_s = 180
[[population]]
side = "sell"
count = 5
strategy = { kind = "zic" }
[[population]]
side = "buy"
count = 5
strategy = { kind = "zic" }
"#;

    #[test]
    fn derived_seeds_differ() {
        assert_ne!(derive_seed(1, 0), derive_seed(1, 1));
        assert_ne!(derive_seed(1, 0), derive_seed(2, 0));
        assert_eq!(derive_seed(9, 4), derive_seed(9, 4));
    }

    #[test]
    fn session_record_accounting() {
        let c = config(BOX_ZIC);
        let mut tape = Vec::new();
        let r = run_session_once(&c, 1, Arc::new(LutCache::new()), Some(&mut tape)).unwrap();
        assert_eq!(r.samples.len(), 10);
        for s in &r.samples {
            assert_eq!(s.total_profit(), 40 * s.trades as i64);
        }
        let lines = String::from_utf8(tape).unwrap();
        assert_eq!(lines.lines().count() as u64, r.trade_count);
        assert!(r.smoothed.iter().all(|row| row.iter().all(|&s| s == 0.0)));
    }

    #[test]
    fn zero_duration_is_empty() {
        let mut c = config(BOX_ZIC);
        c.market.duration_s = 0.0;
        let r = run_session_once(&c, 1, Arc::new(LutCache::new()), None).unwrap();
        assert!(r.samples.is_empty());
        assert_eq!(r.total_profit(), 0);
        assert!(r.terminal_strategies().is_empty());
    }

    #[test]
    fn script_parsing() {
        let text = "time_s,event\n10,add_bid:3\n12.5,remove_bid\n11,add_ask:2\n";
        let ev = parse_script(text, Path::new("s.csv")).unwrap();
        assert_eq!(ev.len(), 3);
        assert_eq!(ev[1].action, BookAction::AddAsk(2));
        assert_eq!(ev[2].action, BookAction::RemoveBid(1));
        assert!(parse_script("h\n1,explode\n", Path::new("s.csv")).is_err());
    }

    #[test]
    fn impact_scenario_windows() {
        let cfg = ImpactConfig::default();
        let quotes = run_impact(&cfg, &default_script(), 5).unwrap();
        assert_eq!(quotes.len(), 2000);
        let (pre, post) = split_at_time(&quotes, 10.0, 1000);
        assert_eq!((pre.len(), post.len()), (1000, 1000));
        assert!(quotes[..1000].iter().all(|q| q.strategy == 0.0));
        assert!(quotes[1000].strategy > 0.5);
        assert!(metrics::mean(&post).unwrap() > metrics::mean(&pre).unwrap());
    }

    #[test]
    fn landscape_needs_one_climber() {
        let c = config(BOX_ZIC);
        assert!(run_landscape(&c).is_err());
    }
}
