//! Experiment configuration, runners, metrics and output files.

pub mod config;
pub mod metrics;
pub mod output;
pub mod runner;

pub use config::{ExperimentConfig, ImpactConfig, LandscapeConfig, MarketConfig, Population, RqaConfig, Schedule, SessionSection};
pub use runner::{derive_seed, run_impact, run_landscape, run_repetitions, run_session_once, Landscape, SessionRecord};
