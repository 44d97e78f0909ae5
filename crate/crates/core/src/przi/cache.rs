use std::collections::HashMap;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, RwLock};

use super::{build_distribution, PriceBounds, PrziDistribution, StrategyValue};
use crate::exchange::{Price, Side};

/// Strategy values are keyed at this resolution.
pub const S_RESOLUTION: f64 = 1e-4;

/// Entries held before the cache is flushed.
pub const DEFAULT_CACHE_CAPACITY: usize = 16_384;

/// Cache key: quantised strategy, bounds and side.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LutKey {
    pub s_steps: i32,
    pub min: Price,
    pub max: Price,
    pub side: Side,
}

impl LutKey {
    pub fn new(s: StrategyValue, bounds: PriceBounds, side: Side) -> Self {
        Self {
            s_steps: (s.get() / S_RESOLUTION).round() as i32,
            min: bounds.min,
            max: bounds.max,
            side,
        }
    }

    /// The quantised strategy value the table is built for.
    pub fn strategy(&self) -> StrategyValue {
        StrategyValue::clamped(f64::from(self.s_steps) * S_RESOLUTION)
    }

    pub fn bounds(&self) -> PriceBounds {
        PriceBounds {
            min: self.min,
            max: self.max,
        }
    }
}

/// Shared store of built distributions.
///
/// Tables are immutable once built, so concurrent readers never block each
/// other. Two threads racing on the same missing key may both build it; the
/// tables are identical and the later insert wins. When the store grows past
/// its capacity it is cleared; tables already handed out stay alive through
/// their `Arc`.
#[derive(Debug)]
pub struct LutCache {
    tables: RwLock<HashMap<LutKey, Arc<PrziDistribution>>>,
    builds: AtomicU64,
    capacity: usize,
}

impl Default for LutCache {
    fn default() -> Self {
        Self::with_capacity(DEFAULT_CACHE_CAPACITY)
    }
}

impl LutCache {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn with_capacity(capacity: usize) -> Self {
        Self {
            tables: RwLock::new(HashMap::new()),
            builds: AtomicU64::new(0),
            capacity: capacity.max(1),
        }
    }

    /// Number of tables built since creation.
    pub fn builds(&self) -> u64 {
        self.builds.load(Ordering::Relaxed)
    }

    pub fn len(&self) -> usize {
        self.tables.read().expect("lut cache poisoned").len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn get_or_build(&self, key: LutKey) -> Arc<PrziDistribution> {
        if let Some(t) = self.tables.read().expect("lut cache poisoned").get(&key) {
            return Arc::clone(t);
        }
        let table = Arc::new(build_distribution(key.strategy(), key.bounds(), key.side));
        self.builds.fetch_add(1, Ordering::Relaxed);
        let mut tables = self.tables.write().expect("lut cache poisoned");
        if tables.len() >= self.capacity {
            tables.clear();
        }
        tables.insert(key, Arc::clone(&table));
        table
    }

    /// Convenience wrapper building the key from its parts.
    pub fn distribution(&self, s: StrategyValue, bounds: PriceBounds, side: Side) -> Arc<PrziDistribution> {
        self.get_or_build(LutKey::new(s, bounds, side))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn key(s: f64, side: Side) -> LutKey {
        LutKey::new(
            StrategyValue::new(s).unwrap(),
            PriceBounds::new(Price(60), Price(100)),
            side,
        )
    }

    #[test]
    fn identical_keys_share_one_table() {
        let cache = LutCache::new();
        let a = cache.get_or_build(key(0.3, Side::Buy));
        let b = cache.get_or_build(key(0.3, Side::Buy));
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(cache.builds(), 1);
    }

    #[test]
    fn strategy_is_quantised_before_keying() {
        let cache = LutCache::new();
        let a = cache.get_or_build(key(0.30001, Side::Buy));
        let b = cache.get_or_build(key(0.29999, Side::Buy));
        assert!(Arc::ptr_eq(&a, &b));
        assert_eq!(a.strategy().get(), 0.3);
        cache.get_or_build(key(0.3002, Side::Buy));
        assert_eq!(cache.builds(), 2);
    }

    #[test]
    fn overflow_flushes() {
        let cache = LutCache::with_capacity(2);
        cache.get_or_build(key(0.1, Side::Buy));
        cache.get_or_build(key(0.2, Side::Buy));
        cache.get_or_build(key(0.3, Side::Buy));
        assert_eq!(cache.len(), 1);
    }

    #[test]
    fn concurrent_access() {
        let cache = Arc::new(LutCache::new());
        std::thread::scope(|scope| {
            for t in 0..4 {
                let cache = Arc::clone(&cache);
                scope.spawn(move || {
                    for i in 0..50 {
                        let s = f64::from((i + t) % 20) / 20.0;
                        let d = cache.get_or_build(key(s, Side::Sell));
                        assert!((d.pmf().iter().sum::<f64>() - 1.0).abs() < 1e-9);
                    }
                });
            }
        });
        assert_eq!(cache.len(), 20);
    }
}
