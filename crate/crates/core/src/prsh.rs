//! Stochastic hill climbing over PRZI strategy values.
//!
//! A trader holds `k` candidate strategies. Each is traded exclusively for
//! one evaluation period; once all `k` have been scored by profit per second
//! the best becomes the elite, and the next set is the elite plus `k - 1`
//! Gaussian mutants of it.

use rand::Rng;
use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::przi::StrategyValue;

/// How the initial strategy set is created.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "lowercase")]
pub enum Genesis {
    /// Independent `U(-1, 1)` draws.
    Uniform,
    /// Every strategy set to `value`.
    Constant { value: f64 },
    /// Evenly spaced `2i / (k - 1) - 1` for `i = 0..k`.
    Grid,
}

impl Default for Genesis {
    fn default() -> Self {
        Genesis::Constant { value: 0.0 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrshConfig {
    pub k: usize,
    /// Seconds each strategy trades before the next one takes over.
    pub eval_period_s: f64,
    /// Top-two fitness gap (profit per second) below which the elite is a coin flip.
    pub tie_threshold: f64,
    /// Standard deviation of the mutation.
    pub sigma: f64,
    pub genesis: Genesis,
}

impl Default for PrshConfig {
    fn default() -> Self {
        Self {
            k: 4,
            eval_period_s: 7200.0,
            tie_threshold: 1e-3,
            sigma: 0.01,
            genesis: Genesis::default(),
        }
    }
}

impl PrshConfig {
    pub fn validate(&self) -> Result<()> {
        if self.k < 2 {
            return Err(Error::Config(format!("PRSH needs k >= 2, got {}", self.k)));
        }
        if !(self.eval_period_s > 0.0) {
            return Err(Error::Config("PRSH eval_period_s must be positive".into()));
        }
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(Error::Config("PRSH sigma must be finite and non-negative".into()));
        }
        if let Genesis::Constant { value } = self.genesis {
            StrategyValue::new(value)?;
        }
        Ok(())
    }
}

/// Creates the initial strategy set.
pub fn genesis<R: Rng + ?Sized>(mode: Genesis, k: usize, rng: &mut R) -> Result<Vec<StrategyValue>> {
    if k < 2 {
        return Err(Error::Config(format!("genesis needs k >= 2, got {k}")));
    }
    Ok(match mode {
        Genesis::Uniform => (0..k)
            .map(|_| StrategyValue::clamped(rng.random_range(-1.0..=1.0)))
            .collect(),
        Genesis::Constant { value } => vec![StrategyValue::new(value)?; k],
        Genesis::Grid => (0..k)
            .map(|i| StrategyValue::clamped(2.0 * i as f64 / (k - 1) as f64 - 1.0))
            .collect(),
    })
}

/// `elite + N(0, sigma)`, truncated to `[-1, 1]`.
pub fn mutate<R: Rng + ?Sized>(elite: StrategyValue, sigma: f64, rng: &mut R) -> StrategyValue {
    let noise = Normal::new(0.0, sigma).expect("sigma validated as finite and non-negative");
    StrategyValue::clamped(elite.get() + noise.sample(rng))
}

/// Profit per second over an evaluation window.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct FitnessScore {
    pub profit: i64,
    pub elapsed: f64,
}

impl FitnessScore {
    pub fn pps(&self) -> f64 {
        if self.elapsed > 0.0 {
            self.profit as f64 / self.elapsed
        } else {
            0.0
        }
    }
}

/// Index of the elite: the highest profit per second, or a fair coin between
/// the top two when they are within `tie_threshold` of each other.
pub fn rank_and_select<R: Rng + ?Sized>(scores: &[FitnessScore], tie_threshold: f64, rng: &mut R) -> usize {
    assert!(!scores.is_empty(), "cannot rank an empty strategy set");
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].pps().total_cmp(&scores[a].pps()));
    if order.len() >= 2 {
        let (first, second) = (order[0], order[1]);
        if (scores[first].pps() - scores[second].pps()).abs() < tie_threshold {
            return if rng.random_bool(0.5) { first } else { second };
        }
    }
    order[0]
}

/// Scores of one completed evaluation cycle.
#[derive(Clone, Debug, PartialEq)]
pub struct CycleReport {
    pub strategies: Vec<StrategyValue>,
    pub scores: Vec<FitnessScore>,
    pub elite: StrategyValue,
    /// Time the cycle closed.
    pub time: f64,
}

/// Per-trader hill-climbing state.
#[derive(Clone, Debug)]
pub struct PrshState {
    config: PrshConfig,
    strategies: Vec<StrategyValue>,
    scores: Vec<FitnessScore>,
    active: usize,
    window_start: f64,
    cycles: u64,
    last_elite_pps: Option<f64>,
    last_report: Option<CycleReport>,
}

impl PrshState {
    pub fn new<R: Rng + ?Sized>(config: PrshConfig, start_time: f64, rng: &mut R) -> Result<Self> {
        config.validate()?;
        let strategies = genesis(config.genesis, config.k, rng)?;
        Ok(Self::with_strategies(config, strategies, start_time))
    }

    /// Starts from an explicit strategy set (its length overrides `config.k`).
    pub fn with_strategies(mut config: PrshConfig, strategies: Vec<StrategyValue>, start_time: f64) -> Self {
        config.k = strategies.len();
        Self {
            config,
            scores: vec![FitnessScore::default(); strategies.len()],
            strategies,
            active: 0,
            window_start: start_time,
            cycles: 0,
            last_elite_pps: None,
            last_report: None,
        }
    }

    pub fn config(&self) -> &PrshConfig {
        &self.config
    }

    pub fn strategies(&self) -> &[StrategyValue] {
        &self.strategies
    }

    pub fn active_index(&self) -> usize {
        self.active
    }

    /// The strategy currently trading.
    pub fn active(&self) -> StrategyValue {
        self.strategies[self.active]
    }

    /// The elite carried over from the last cycle (slot 0).
    pub fn elite(&self) -> StrategyValue {
        self.strategies[0]
    }

    pub fn cycles(&self) -> u64 {
        self.cycles
    }

    /// Profit per second of the elite when it was selected.
    pub fn last_elite_pps(&self) -> Option<f64> {
        self.last_elite_pps
    }

    /// Report of the most recently completed cycle.
    pub fn last_report(&self) -> Option<&CycleReport> {
        self.last_report.as_ref()
    }

    pub fn scores(&self) -> &[FitnessScore] {
        &self.scores
    }

    /// Credits profit to the active strategy.
    pub fn record_profit(&mut self, amount: i64) {
        self.scores[self.active].profit += amount;
    }

    /// Advances the evaluation clock to `now`. Closes the active window once
    /// it has run for a full evaluation period and, after the last window of
    /// a cycle, climbs and returns the cycle's report.
    pub fn advance<R: Rng + ?Sized>(&mut self, now: f64, rng: &mut R) -> Option<CycleReport> {
        let elapsed = now - self.window_start;
        if elapsed < self.config.eval_period_s {
            return None;
        }
        self.scores[self.active].elapsed = elapsed;
        self.window_start = now;
        self.active += 1;
        if self.active < self.strategies.len() {
            return None;
        }
        let strategies = self.strategies.clone();
        let scores = self.scores.clone();
        let elite = self.climb_step(rng);
        let report = CycleReport {
            strategies,
            scores,
            elite,
            time: now,
        };
        self.last_report = Some(report.clone());
        Some(report)
    }

    /// Replaces the set with the elite and `k - 1` mutants of it and resets
    /// the accumulators. Returns the elite.
    pub fn climb_step<R: Rng + ?Sized>(&mut self, rng: &mut R) -> StrategyValue {
        let idx = rank_and_select(&self.scores, self.config.tie_threshold, rng);
        let elite = self.strategies[idx];
        self.last_elite_pps = Some(self.scores[idx].pps());
        self.strategies[0] = elite;
        for slot in 1..self.strategies.len() {
            self.strategies[slot] = mutate(elite, self.config.sigma, rng);
        }
        self.scores.iter_mut().for_each(|s| *s = FitnessScore::default());
        self.active = 0;
        self.cycles += 1;
        elite
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn rng(seed: u64) -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(seed)
    }

    fn score(profit: i64, elapsed: f64) -> FitnessScore {
        FitnessScore { profit, elapsed }
    }

    #[test]
    fn grid_genesis_with_21_points() {
        let g = genesis(Genesis::Grid, 21, &mut rng(0)).unwrap();
        assert_eq!(g.len(), 21);
        for (i, s) in g.iter().enumerate() {
            assert!((s.get() - (-1.0 + 0.1 * i as f64)).abs() < 1e-12);
        }
        assert_eq!(g[0].get(), -1.0);
        assert_eq!(g[20].get(), 1.0);
    }

    #[test]
    fn constant_and_uniform_genesis() {
        let g = genesis(Genesis::Constant { value: 0.0 }, 4, &mut rng(0)).unwrap();
        assert!(g.iter().all(|s| s.get() == 0.0));
        let a = genesis(Genesis::Uniform, 4, &mut rng(9)).unwrap();
        let b = genesis(Genesis::Uniform, 4, &mut rng(9)).unwrap();
        assert_eq!(a, b);
        assert!(a.iter().all(|s| (-1.0..=1.0).contains(&s.get())));
        assert!(genesis(Genesis::Uniform, 1, &mut rng(0)).is_err());
    }

    #[test]
    fn mutation_clamps_at_bounds() {
        let mut r = rng(1);
        for _ in 0..1000 {
            let m = mutate(StrategyValue::GVWY, 0.05, &mut r);
            assert!(m.get() <= 1.0);
        }
    }

    #[test]
    fn mutation_matches_independent_gaussian_draw() {
        let mut a = rng(42);
        let mut b = rng(42);
        let draw: f64 = Normal::new(0.0, 0.01).unwrap().sample(&mut b);
        let m = mutate(StrategyValue::new(0.5).unwrap(), 0.01, &mut a);
        assert_eq!(m.get(), (0.5 + draw).clamp(-1.0, 1.0));
    }

    #[test]
    fn rank_picks_highest_pps() {
        let scores = [score(10, 100.0), score(30, 100.0)];
        assert_eq!(rank_and_select(&scores, 1e-3, &mut rng(0)), 1);
    }

    #[test]
    fn near_ties_are_broken_at_random() {
        let scores = [score(300, 1000.0), score(3004, 10000.0), score(0, 1000.0)];
        let mut seen = [false; 2];
        for seed in 0..64 {
            seen[rank_and_select(&scores, 1e-3, &mut rng(seed))] = true;
        }
        assert_eq!(seen, [true, true]);
        let zeros = [score(0, 10.0); 3];
        for seed in 0..16 {
            assert!(rank_and_select(&zeros, 1e-3, &mut rng(seed)) < 2);
        }
    }

    #[test]
    fn cycle_takes_k_eval_periods() {
        let config = PrshConfig {
            k: 4,
            eval_period_s: 7200.0,
            ..PrshConfig::default()
        };
        let mut r = rng(5);
        let mut state = PrshState::new(config, 0.0, &mut r).unwrap();
        let mut t = 0.0;
        let mut report = None;
        while report.is_none() {
            t += 1.0;
            report = state.advance(t, &mut r);
        }
        assert_eq!(t, 28_800.0);
        assert_eq!(state.cycles(), 1);
        assert_eq!(report.unwrap().scores.len(), 4);
    }

    #[test]
    fn climb_keeps_elite_and_resets() {
        let config = PrshConfig {
            k: 2,
            eval_period_s: 10.0,
            ..PrshConfig::default()
        };
        let strategies = vec![StrategyValue::new(0.2).unwrap(), StrategyValue::new(0.4).unwrap()];
        let mut state = PrshState::with_strategies(config, strategies, 0.0);
        let mut r = rng(2);
        state.record_profit(10);
        assert!(state.advance(10.0, &mut r).is_none());
        assert_eq!(state.active().get(), 0.4);
        state.record_profit(50);
        let report = state.advance(20.0, &mut r).unwrap();
        assert_eq!(report.elite.get(), 0.4);
        assert_eq!(state.elite().get(), 0.4);
        assert_eq!(state.active_index(), 0);
        assert!(state.scores().iter().all(|s| s.profit == 0));
        assert_eq!(state.last_elite_pps(), Some(5.0));
    }

    #[test]
    fn zero_sigma_converges_to_copies_of_elite() {
        let config = PrshConfig {
            k: 3,
            eval_period_s: 1.0,
            sigma: 0.0,
            genesis: Genesis::Uniform,
            ..PrshConfig::default()
        };
        let mut r = rng(8);
        let mut state = PrshState::new(config, 0.0, &mut r).unwrap();
        let mut t = 0.0;
        for _ in 0..3 {
            t += 1.0;
            state.record_profit(1);
            state.advance(t, &mut r);
        }
        let elite = state.elite();
        assert!(state.strategies().iter().all(|&s| s == elite));
        for _ in 0..30 {
            t += 1.0;
            state.record_profit(r.random_range(0..5));
            state.advance(t, &mut r);
            assert!(state.strategies().iter().all(|&s| s == elite));
        }
    }

    #[test]
    fn invalid_config_rejected() {
        let bad = PrshConfig { k: 1, ..PrshConfig::default() };
        assert!(PrshState::new(bad, 0.0, &mut rng(0)).is_err());
    }
}
