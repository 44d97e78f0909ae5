//! Experiment configuration files.

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::{Error, Result};
use crate::exchange::{Price, Side};
use crate::przi::BuyerFloorPolicy;
use crate::session::SessionParams;
use crate::traders::{StrategyKind, StrategySpec};

/// Limit-price schedule.
#[derive(Clone, Copy, Debug, PartialEq, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase", deny_unknown_fields)]
pub enum Schedule {
    /// Every seller gets `seller_limit`, every buyer `buyer_limit`.
    Box { seller_limit: Price, buyer_limit: Price },
}

impl Default for Schedule {
    fn default() -> Self {
        Schedule::Box {
            seller_limit: Price(60),
            buyer_limit: Price(100),
        }
    }
}

impl Schedule {
    pub fn limit(&self, side: Side) -> Price {
        match (self, side) {
            (Schedule::Box { seller_limit, .. }, Side::Sell) => *seller_limit,
            (Schedule::Box { buyer_limit, .. }, Side::Buy) => *buyer_limit,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MarketConfig {
    pub max_price: Price,
    pub steps_per_second: f64,
    pub duration_s: f64,
    pub buyer_floor: BuyerFloorPolicy,
    pub schedule: Schedule,
    /// Interval between strategy-vector and profit samples.
    pub sample_interval_s: f64,
    /// Trailing window of the smoothed strategy series.
    pub smoothing_window_s: f64,
}

impl Default for MarketConfig {
    fn default() -> Self {
        Self {
            max_price: Price(500),
            steps_per_second: 60.0,
            duration_s: 3600.0,
            buyer_floor: BuyerFloorPolicy::ZicStyle,
            schedule: Schedule::default(),
            sample_interval_s: 3600.0,
            smoothing_window_s: 12.0 * 3600.0,
        }
    }
}

impl MarketConfig {
    pub fn dt(&self) -> f64 {
        1.0 / self.steps_per_second
    }

    /// Simulation steps between samples.
    pub fn steps_per_sample(&self) -> u64 {
        (self.sample_interval_s * self.steps_per_second).round().max(1.0) as u64
    }

    /// Smoothing window in samples.
    pub fn smoothing_samples(&self) -> usize {
        (self.smoothing_window_s / self.sample_interval_s).round().max(1.0) as usize
    }

    pub fn session_params(&self, seed: u64) -> SessionParams {
        SessionParams {
            max_price: self.max_price,
            dt: self.dt(),
            duration: self.duration_s,
            seed,
            buyer_floor: self.buyer_floor,
        }
    }
}

/// `count` traders on one side sharing a strategy.
#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Population {
    pub side: Side,
    pub count: u32,
    pub strategy: StrategySpec,
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SessionSection {
    /// Independent repetitions, each with its own derived seed.
    pub repetitions: u32,
    /// Equilibrium price for Smith's alpha; alpha is skipped without it.
    pub p0: Option<f64>,
    /// Trailing window for the per-run profit figure used in the regression.
    pub profit_window_s: Option<f64>,
    pub write_trades: bool,
    pub histogram_bin_width: f64,
}

impl Default for SessionSection {
    fn default() -> Self {
        Self {
            repetitions: 1,
            p0: None,
            profit_window_s: None,
            write_trades: true,
            histogram_bin_width: 0.1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct LandscapeConfig {
    pub delta_s: f64,
    pub eval_period_s: f64,
    /// Independent sessions averaged per grid point.
    pub seeds: u32,
}

impl Default for LandscapeConfig {
    fn default() -> Self {
        Self {
            delta_s: 0.05,
            eval_period_s: 600.0,
            seeds: 1,
        }
    }
}

impl LandscapeConfig {
    /// Grid size `2 / delta_s + 1`.
    pub fn grid_points(&self) -> Result<usize> {
        let k = (2.0 / self.delta_s).round() as i64 + 1;
        if !(self.delta_s > 0.0) || k < 2 || ((k - 1) as f64 * self.delta_s - 2.0).abs() > 1e-9 {
            return Err(Error::Config(format!(
                "landscape delta_s {} must divide 2 into at least one step",
                self.delta_s
            )));
        }
        Ok(k as usize)
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ImpactConfig {
    pub limit: Price,
    pub quote_interval_s: f64,
    pub duration_s: f64,
    pub gain: f64,
    pub bid: Price,
    pub ask: Price,
    pub bid_qty: u32,
    pub ask_qty: u32,
    /// `time_s,event` rows; defaults to three extra bids at t = 10 s.
    pub script: Option<PathBuf>,
}

impl Default for ImpactConfig {
    fn default() -> Self {
        Self {
            limit: Price(150),
            quote_interval_s: 0.01,
            duration_s: 20.0,
            gain: 4.0,
            bid: Price(99),
            ask: Price(101),
            bid_qty: 1,
            ask_qty: 1,
            script: None,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RqaConfig {
    /// Trajectory CSV.
    pub input: PathBuf,
    /// Per-component tolerance; the radius is `sqrt(dim * tolerance^2)`.
    pub tolerance: f64,
    /// Explicit radius, overriding `tolerance`.
    pub epsilon: Option<f64>,
    pub v_min: usize,
    pub downsample: usize,
    pub sparse_csv: bool,
}

impl Default for RqaConfig {
    fn default() -> Self {
        Self {
            input: PathBuf::from("strategies.csv"),
            tolerance: 0.05,
            epsilon: None,
            v_min: 2,
            downsample: 1,
            sparse_csv: false,
        }
    }
}

/// One experiment file.
#[derive(Clone, Debug, Default, PartialEq, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub seed: u64,
    pub market: MarketConfig,
    pub population: Vec<Population>,
    pub session: SessionSection,
    pub landscape: Option<LandscapeConfig>,
    pub impact: Option<ImpactConfig>,
    pub rqa: Option<RqaConfig>,
}

impl ExperimentConfig {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(toml::from_str(text)?)
    }

    /// Loads a file, resolving relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        let mut config = Self::parse(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        if let Some(impact) = &mut config.impact {
            if let Some(script) = &mut impact.script {
                *script = base.join(&*script);
            }
        }
        if let Some(rqa) = &mut config.rqa {
            rqa.input = base.join(&rqa.input);
        }
        Ok(config)
    }

    pub fn count(&self, side: Side) -> u32 {
        self.population.iter().filter(|p| p.side == side).map(|p| p.count).sum()
    }

    /// Checks everything a market session needs before it starts.
    pub fn validate_market(&self) -> Result<()> {
        let m = &self.market;
        if !(m.steps_per_second > 0.0) || !(m.duration_s >= 0.0) || !(m.sample_interval_s > 0.0) {
            return Err(Error::Config(
                "steps_per_second and sample_interval_s must be positive, duration_s non-negative".into(),
            ));
        }
        if !(m.smoothing_window_s > 0.0) {
            return Err(Error::Config("smoothing_window_s must be positive".into()));
        }
        if m.max_price.0 < 1 {
            return Err(Error::Config("max_price must be at least 1".into()));
        }
        let Schedule::Box {
            seller_limit,
            buyer_limit,
        } = m.schedule;
        if seller_limit >= buyer_limit {
            return Err(Error::Config(format!(
                "box schedule needs seller_limit < buyer_limit, got {seller_limit} and {buyer_limit}"
            )));
        }
        if buyer_limit > m.max_price || seller_limit > m.max_price || seller_limit.0 < 1 {
            return Err(Error::Config(format!("limits must lie in [1, {}]", m.max_price)));
        }
        for side in [Side::Buy, Side::Sell] {
            if self.count(side) == 0 {
                return Err(Error::Config(format!("no {} traders configured", side.label())));
            }
        }
        for p in &self.population {
            p.strategy.validate()?;
        }
        if self.session.repetitions == 0 {
            return Err(Error::Config("repetitions must be at least 1".into()));
        }
        if !(self.session.histogram_bin_width > 0.0) {
            return Err(Error::Config("histogram_bin_width must be positive".into()));
        }
        Ok(())
    }

    /// Number of hill-climbing traders.
    pub fn prsh_count(&self) -> u32 {
        self.population
            .iter()
            .filter(|p| p.strategy.kind() == StrategyKind::Prsh)
            .map(|p| p.count)
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = r#"
seed = 7

[market]
duration_s = 7200
sample_interval_s = 600

[[population]]
side = "sell"
count = 1
strategy = { kind = "prsh", k = 4, eval_period_s = 600.0 }

[[population]]
side = "sell"
count = 29
strategy = { kind = "gvwy" }

[[population]]
side = "buy"
count = 30
strategy = { kind = "gvwy" }
"#;

    #[test]
    fn parses_and_validates() {
        let c = ExperimentConfig::parse(SAMPLE).unwrap();
        assert_eq!(c.seed, 7);
        assert_eq!(c.count(Side::Sell), 30);
        assert_eq!(c.prsh_count(), 1);
        assert_eq!(c.market.steps_per_sample(), 36_000);
        assert_eq!(c.market.smoothing_samples(), 72);
        c.validate_market().unwrap();
    }

    #[test]
    fn rejects_bad_markets() {
        let mut c = ExperimentConfig::parse(SAMPLE).unwrap();
        c.market.schedule = Schedule::Box {
            seller_limit: Price(100),
            buyer_limit: Price(60),
        };
        assert!(c.validate_market().is_err());
        let mut c = ExperimentConfig::parse(SAMPLE).unwrap();
        c.population.retain(|p| p.side == Side::Sell);
        assert!(c.validate_market().is_err());
        assert!(ExperimentConfig::parse("bogus = 1").is_err());
    }

    #[test]
    fn landscape_grid() {
        let l = LandscapeConfig {
            delta_s: 0.1,
            ..LandscapeConfig::default()
        };
        assert_eq!(l.grid_points().unwrap(), 21);
        assert_eq!(LandscapeConfig::default().grid_points().unwrap(), 41);
        let bad = LandscapeConfig {
            delta_s: 3.0,
            ..LandscapeConfig::default()
        };
        assert!(bad.grid_points().is_err());
    }
}
