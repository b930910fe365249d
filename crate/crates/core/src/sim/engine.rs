use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{ModelConfig, RunConfig, SimError};
use crate::agents::{
    chartist_demand, franke_westerhoff_ed, fundamentalist_demand, ChartistParams,
    FundamentalistParams, FwParams,
};
use crate::environment::HerdingPopulation;
use crate::market::{price_step, MarketError, MarketState};
use crate::timeseries::ReturnSeries;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Diagnostics {
    pub seed: u64,
    pub steps_completed: u64,
    pub burn_in: usize,
    /// Total herding position switches over the run.
    pub switch_count: u64,
    pub max_abs_excess_demand: f64,
    pub blowup_step: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimOutput {
    /// `S_0 ..= S_T`.
    pub log_prices: Vec<f64>,
    /// `S_{k+1} - S_k` for `k >= burn_in`.
    pub returns: ReturnSeries,
    pub diagnostics: Diagnostics,
    /// Herding positions (+1/-1) at start and after every step, when recorded.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub positions: Option<Vec<Vec<i8>>>,
}

impl SimOutput {
    pub fn seed(&self) -> u64 {
        self.diagnostics.seed
    }
}

enum Agents<'a> {
    Fw(&'a FwParams),
    Cross {
        herd: HerdingPopulation,
        fundamentalist: &'a FundamentalistParams,
        weight: f64,
    },
    Custom {
        fundamentalists: &'a [FundamentalistParams],
        chartists: &'a [ChartistParams],
        herd: Option<HerdingPopulation>,
    },
}

impl Agents<'_> {
    fn herd(&self) -> Option<&HerdingPopulation> {
        match self {
            Agents::Cross { herd, .. } => Some(herd),
            Agents::Custom { herd, .. } => herd.as_ref(),
            Agents::Fw(_) => None,
        }
    }
}

fn build_agents<'a, R: Rng>(config: &'a RunConfig, rng: &mut R) -> Result<Agents<'a>, SimError> {
    let herd_err = |e: crate::environment::EnvironmentError| SimError::Config {
        path: "model".into(),
        message: e.to_string(),
    };
    Ok(match &config.model {
        ModelConfig::FwTwoAgent(p) => Agents::Fw(p),
        ModelConfig::CrossHerding(p) => Agents::Cross {
            herd: HerdingPopulation::random(p.agents, p.threshold_band, rng).map_err(herd_err)?,
            fundamentalist: &p.fundamentalist,
            weight: p.fundamental_weight,
        },
        ModelConfig::Custom(p) => Agents::Custom {
            fundamentalists: &p.fundamentalists,
            chartists: &p.chartists,
            herd: match p.herding {
                Some(h) if h.agents > 0 => Some(
                    HerdingPopulation::random(h.agents, h.threshold_band, rng).map_err(herd_err)?,
                ),
                _ => None,
            },
        },
    })
}

fn snapshot(herd: &HerdingPopulation) -> Vec<i8> {
    herd.positions().map(|p| p.as_i8()).collect()
}

/// Runs one simulation; the output is a pure function of `config`.
pub fn run_simulation(config: &RunConfig) -> Result<SimOutput, SimError> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut agents = build_agents(config, &mut rng)?;
    let mut state =
        MarketState::new(config.initial_log_price, config.dt).map_err(|e| SimError::Config {
            path: "initial_log_price".into(),
            message: e.to_string(),
        })?;
    let dt = config.dt;
    let burn_in = config.burn_in_steps();
    let mut diagnostics = Diagnostics {
        seed: config.seed,
        burn_in,
        ..Diagnostics::default()
    };
    let mut positions = if config.record_positions {
        agents.herd().map(|h| {
            let mut rows = Vec::with_capacity(config.steps + 1);
            rows.push(snapshot(h));
            rows
        })
    } else {
        None
    };

    let mut log_prices = Vec::with_capacity(config.steps + 1);
    log_prices.push(state.log_price);
    let mut prev = state.log_price;

    for k in 0..config.steps {
        let s = state.log_price;
        let ed = match &mut agents {
            Agents::Fw(p) => {
                let ed_f = fundamentalist_demand(p.a.at(k), p.log_fundamental.at(k), s);
                let ed_c = chartist_demand(p.b.at(k), s, prev);
                let draw = if p.noise_std > 0.0 {
                    rng.sample::<f64, _>(StandardNormal)
                } else {
                    0.0
                };
                franke_westerhoff_ed(ed_c, ed_f, p.noise_std, draw)
            }
            Agents::Cross {
                herd,
                fundamentalist,
                weight,
            } => {
                let ed_f = fundamentalist_demand(
                    fundamentalist.a,
                    fundamentalist.log_fundamental.at(k),
                    s,
                );
                let ed = (1.0 - *weight) * herd.excess_demand() + *weight * ed_f;
                diagnostics.switch_count += herd.step(ed, dt) as u64;
                ed
            }
            Agents::Custom {
                fundamentalists,
                chartists,
                herd,
            } => {
                let mut total: f64 = fundamentalists
                    .iter()
                    .map(|f| fundamentalist_demand(f.a, f.log_fundamental.at(k), s))
                    .sum();
                total += chartists
                    .iter()
                    .map(|c| chartist_demand(c.b, s, prev))
                    .sum::<f64>();
                let mut count = fundamentalists.len() + chartists.len();
                if let Some(h) = herd.as_ref() {
                    total += h.positions().map(|p| p.sign()).sum::<f64>();
                    count += h.len();
                }
                let ed = total / count as f64;
                if let Some(h) = herd.as_mut() {
                    diagnostics.switch_count += h.step(ed, dt) as u64;
                }
                ed
            }
        };
        diagnostics.max_abs_excess_demand = diagnostics.max_abs_excess_demand.max(ed.abs());

        let eta: f64 = rng.sample(StandardNormal);
        prev = s;
        state = match price_step(&state, ed, &config.price_rule, eta) {
            Ok(next) => next,
            Err(MarketError::NumericalBlowup { step, log_price }) => {
                diagnostics.blowup_step = Some(step);
                return Err(SimError::NumericalBlowup {
                    step,
                    log_price,
                    diagnostics: Box::new(diagnostics),
                });
            }
            Err(e) => {
                return Err(SimError::Config {
                    path: "price_rule".into(),
                    message: e.to_string(),
                })
            }
        };
        diagnostics.steps_completed = state.step_index;
        log_prices.push(state.log_price);
        if let (Some(rows), Some(h)) = (positions.as_mut(), agents.herd()) {
            rows.push(snapshot(h));
        }
    }

    let returns: Vec<f64> = log_prices[burn_in..]
        .windows(2)
        .map(|w| w[1] - w[0])
        .collect();
    Ok(SimOutput {
        log_prices,
        returns: ReturnSeries::raw(returns, format!("simulation seed {}", config.seed)),
        diagnostics,
        positions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

pub fn replication_seed(base_seed: u64, replication: usize) -> u64 {
    base_seed.wrapping_add(replication as u64)
}

/// Runs `replications` independent copies in parallel, replication `r`
/// seeded with `seed + r`. Results are in replication order.
pub fn run_ensemble(config: &RunConfig, replications: usize) -> Vec<Result<SimOutput, SimError>> {
    run_ensemble_with(config, replications, Execution::Parallel)
}

pub fn run_ensemble_with(
    config: &RunConfig,
    replications: usize,
    execution: Execution,
) -> Vec<Result<SimOutput, SimError>> {
    let run = |r: usize| {
        let mut cfg = config.clone();
        cfg.seed = replication_seed(config.seed, r);
        run_simulation(&cfg)
    };
    match execution {
        Execution::Sequential => (0..replications).map(run).collect(),
        Execution::Parallel => (0..replications).into_par_iter().map(run).collect(),
    }
}
