//! Seeded Monte-Carlo runs wiring agent designs, the herding environment and
//! the price rule together.
//!
//! # Random numbers
//!
//! Every run owns one `ChaCha8Rng` seeded with `seed_from_u64(seed)`;
//! replication `r` of an ensemble uses `seed + r` (wrapping). Draws happen in
//! a fixed order:
//!
//! 1. herding population initialization, agent by agent: a fair coin for the
//!    position, then a uniform threshold;
//! 2. per step: the Franke-Westerhoff noise draw (only for `fw_two_agent`
//!    with `noise_std > 0`), then the price noise `eta`.
//!
//! Gaussian draws use `rand_distr::StandardNormal`.
//!
//! # Step order
//!
//! read state, agent demands, aggregate `ED`, herding update against that
//! `ED`, price update, record.

mod config;
mod engine;
pub mod io;

pub use config::{CrossHerdingParams, CustomParams, HerdingGroup, ModelConfig, RunConfig};
pub use engine::{
    replication_seed, run_ensemble, run_ensemble_with, run_simulation, Diagnostics, Execution,
    SimOutput,
};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },
    #[error("numerical blowup at step {step} (log price {log_price})")]
    NumericalBlowup {
        step: u64,
        log_price: f64,
        diagnostics: Box<Diagnostics>,
    },
}
