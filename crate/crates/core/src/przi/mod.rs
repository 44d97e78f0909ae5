//! Parameterised-response quote-price distributions.
//!
//! A strategy value `s` in `[-1, 1]` warps a discrete quote-price PMF over
//! `[p_min, p_max]`: `s = 0` is uniform (ZIC), `s = +1` puts all mass on the
//! trader's limit (GVWY), and `s = -1` together with the collapsing price
//! bounds reproduces the one-tick improvement of SHVR.

mod bounds;
mod cache;
mod distribution;
mod shape;

pub use bounds::{blended_bounds, BoundEstimator, BuyerFloorPolicy, EstimatorEvent};
pub use cache::{LutCache, LutKey, DEFAULT_CACHE_CAPACITY, S_RESOLUTION};
pub use distribution::{build_distribution, write_debug_csv, PriceBounds, PrziDistribution, StrategyValue};
pub use shape::{c_of_s, pmf_envelope, rectifier_theta, Rectifier, SHAPE_GAIN};
