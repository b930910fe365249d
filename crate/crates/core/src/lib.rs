//! Agent-based market simulation and stylized-fact statistics.
//!
//! The simulator is assembled from three building blocks: agent designs
//! ([`agents`]), a price adjustment rule ([`market`]) and an environment
//! coupling the agents ([`environment`]). [`sim`] runs them as seeded
//! Monte-Carlo experiments; [`stats`] measures fat tails, volatility
//! clustering and raw-return autocorrelation on simulated or ingested
//! ([`ingest`]) return series.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod agents;
pub mod environment;
pub mod ingest;
pub mod market;
pub mod sim;
pub mod stats;
pub mod timeseries;

pub use sim::{run_ensemble, run_simulation, RunConfig, SimError, SimOutput};
pub use stats::{full_report, StatsError, StatsReport};
pub use timeseries::{absolute_returns, log_returns, PriceSeries, ReturnKind, ReturnSeries};
