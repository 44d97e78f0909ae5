use std::fmt;
use std::io::Write;

use serde::{Deserialize, Serialize};

use super::shape::{c_of_s, envelope_with_c};
use crate::error::{Error, Result};
use crate::exchange::{Price, Side};

/// A PRZI strategy value in `[-1, 1]`.
#[derive(Clone, Copy, Debug, Default, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(try_from = "f64", into = "f64")]
pub struct StrategyValue(f64);

impl StrategyValue {
    pub const SHVR: StrategyValue = StrategyValue(-1.0);
    pub const ZIC: StrategyValue = StrategyValue(0.0);
    pub const GVWY: StrategyValue = StrategyValue(1.0);

    pub fn new(s: f64) -> Result<Self> {
        if (-1.0..=1.0).contains(&s) {
            Ok(Self(s))
        } else {
            Err(Error::StrategyOutOfRange(s))
        }
    }

    /// Clamps into `[-1, 1]`; NaN and negative zero become zero.
    pub fn clamped(s: f64) -> Self {
        if s.is_nan() || s == 0.0 {
            Self(0.0)
        } else {
            Self(s.clamp(-1.0, 1.0))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl TryFrom<f64> for StrategyValue {
    type Error = Error;

    fn try_from(s: f64) -> Result<Self> {
        Self::new(s)
    }
}

impl From<StrategyValue> for f64 {
    fn from(s: StrategyValue) -> f64 {
        s.0
    }
}

impl fmt::Display for StrategyValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

/// Inclusive price range `[min, max]` a distribution is defined over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PriceBounds {
    pub min: Price,
    pub max: Price,
}

impl PriceBounds {
    /// Orders the endpoints so that `min <= max`.
    pub fn new(a: Price, b: Price) -> Self {
        Self {
            min: a.min(b),
            max: a.max(b),
        }
    }

    pub fn single(p: Price) -> Self {
        Self { min: p, max: p }
    }

    /// Extent in ticks, `max - min`.
    pub fn range(&self) -> u32 {
        self.max.0 - self.min.0
    }

    pub fn contains(&self, p: Price) -> bool {
        self.min <= p && p <= self.max
    }
}

/// Normalised quote-price PMF with its cumulative lookup table.
#[derive(Clone, Debug, PartialEq)]
pub struct PrziDistribution {
    s: StrategyValue,
    bounds: PriceBounds,
    side: Side,
    pmf: Vec<f64>,
    cdf: Vec<f64>,
}

impl PrziDistribution {
    pub fn strategy(&self) -> StrategyValue {
        self.s
    }

    pub fn bounds(&self) -> PriceBounds {
        self.bounds
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Probabilities for `p_min, p_min + 1, ..., p_max`.
    pub fn pmf(&self) -> &[f64] {
        &self.pmf
    }

    pub fn cdf(&self) -> &[f64] {
        &self.cdf
    }

    pub fn probability(&self, p: Price) -> f64 {
        if self.bounds.contains(p) {
            self.pmf[(p.0 - self.bounds.min.0) as usize]
        } else {
            0.0
        }
    }

    pub fn mean(&self) -> f64 {
        self.pmf
            .iter()
            .enumerate()
            .map(|(j, w)| w * (self.bounds.min.as_f64() + j as f64))
            .sum()
    }

    /// Inverse-transform lookup: the smallest price whose cumulative
    /// probability reaches `u` (prices carrying no mass at the bottom of the
    /// table are skipped).
    pub fn sample(&self, u: f64) -> Price {
        let idx = self.cdf.partition_point(|&c| c < u || c == 0.0);
        let idx = idx.min(self.cdf.len() - 1);
        Price(self.bounds.min.0 + idx as u32)
    }
}

/// Builds the distribution for strategy `s` over `bounds` for a trader on `side`.
///
/// Buyers evaluate the envelope at `N(p) = (p - p_min) / r`, sellers at
/// `1 - N(p)`, so the urgent end is always the trader's own limit. The
/// extremes `s = ±1` are point masses: at the limit end for `+1`, at the far
/// end of the (already collapsed) bounds for `-1`.
pub fn build_distribution(s: StrategyValue, bounds: PriceBounds, side: Side) -> PrziDistribution {
    let r = bounds.range();
    let n = r as usize + 1;
    let mut pmf = vec![0.0; n];
    let point = if r == 0 {
        Some(0)
    } else if s.get() >= 1.0 {
        Some(match side {
            Side::Buy => n - 1,
            Side::Sell => 0,
        })
    } else if s.get() <= -1.0 {
        Some(match side {
            Side::Buy => 0,
            Side::Sell => n - 1,
        })
    } else {
        None
    };
    match point {
        Some(j) => pmf[j] = 1.0,
        None => {
            let c = c_of_s(s);
            let rf = f64::from(r);
            let envelope = |j: usize| envelope_with_c(j as f64 / rf, s, c, r);
            let norm: f64 = (0..n).map(envelope).sum();
            for (j, w) in pmf.iter_mut().enumerate() {
                let x = match side {
                    Side::Buy => j,
                    Side::Sell => n - 1 - j,
                };
                *w = envelope(x) / norm;
            }
        }
    }
    let mut cdf = Vec::with_capacity(n);
    let mut acc = 0.0;
    for w in &pmf {
        acc += w;
        cdf.push(acc.min(1.0));
    }
    // the running sum may drift by a few ulps; the table must end at exactly 1
    cdf[n - 1] = 1.0;
    PrziDistribution {
        s,
        bounds,
        side,
        pmf,
        cdf,
    }
}

/// Writes `price,pmf,cdf` rows for plotting.
pub fn write_debug_csv<W: Write>(dist: &PrziDistribution, mut out: W) -> std::io::Result<()> {
    writeln!(out, "price,pmf,cdf")?;
    for (j, (p, c)) in dist.pmf.iter().zip(&dist.cdf).enumerate() {
        writeln!(out, "{},{},{}", dist.bounds.min.0 + j as u32, p, c)?;
    }
    Ok(())
}
