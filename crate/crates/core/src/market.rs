//! Price adjustment: aggregated excess demand and the disequilibrium update
//! `S' = S + F(S, ED) + G(S, ED) * eta` on the log price.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Log prices beyond this magnitude abort the run before `exp` overflows.
pub const BLOWUP_LIMIT: f64 = 700.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MarketError {
    #[error("no agents to aggregate")]
    NoAgents,
    #[error("numerical blowup at step {step}: log price {log_price}")]
    NumericalBlowup { step: u64, log_price: f64 },
    #[error("invalid parameter {name} = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MarketState {
    pub log_price: f64,
    pub step_index: u64,
    pub dt: f64,
}

impl MarketState {
    pub fn new(log_price: f64, dt: f64) -> Result<Self, MarketError> {
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(MarketError::InvalidParameter {
                name: "dt",
                value: dt,
                reason: "must be finite and positive",
            });
        }
        if !log_price.is_finite() {
            return Err(MarketError::InvalidParameter {
                name: "log_price",
                value: log_price,
                reason: "must be finite",
            });
        }
        Ok(Self {
            log_price,
            step_index: 0,
            dt,
        })
    }

    pub fn price(&self) -> f64 {
        self.log_price.exp()
    }
}

/// Drift `F` and diffusion `G` of the price update.
pub trait PriceDynamics {
    fn drift(&self, log_price: f64, excess_demand: f64, dt: f64) -> f64;
    fn diffusion(&self, log_price: f64, excess_demand: f64, dt: f64) -> f64;
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum DriftRule {
    /// `F = gamma * dt * ED`, gamma the market-maker speed.
    Linear { gamma: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum NoiseRule {
    /// `G = sigma0 * sqrt(dt)`.
    Constant { sigma0: f64 },
    /// `G = delta * sqrt(dt) * |ED|`.
    Proportional { delta: f64 },
    /// Sum of the constant and proportional terms.
    Affine { sigma0: f64, delta: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PriceRule {
    pub drift: DriftRule,
    pub noise: NoiseRule,
}

impl PriceRule {
    pub fn linear(gamma: f64, noise: NoiseRule) -> Self {
        Self {
            drift: DriftRule::Linear { gamma },
            noise,
        }
    }

    pub fn validate(&self) -> Result<(), MarketError> {
        let DriftRule::Linear { gamma } = self.drift;
        non_negative("gamma", gamma)?;
        match self.noise {
            NoiseRule::Constant { sigma0 } => non_negative("sigma0", sigma0),
            NoiseRule::Proportional { delta } => non_negative("delta", delta),
            NoiseRule::Affine { sigma0, delta } => {
                non_negative("sigma0", sigma0)?;
                non_negative("delta", delta)
            }
        }
    }
}

fn non_negative(name: &'static str, value: f64) -> Result<(), MarketError> {
    if value >= 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(MarketError::InvalidParameter {
            name,
            value,
            reason: "must be finite and non-negative",
        })
    }
}

impl PriceDynamics for PriceRule {
    fn drift(&self, _log_price: f64, excess_demand: f64, dt: f64) -> f64 {
        match self.drift {
            DriftRule::Linear { gamma } => gamma * dt * excess_demand,
        }
    }

    fn diffusion(&self, _log_price: f64, excess_demand: f64, dt: f64) -> f64 {
        let sq = dt.sqrt();
        match self.noise {
            NoiseRule::Constant { sigma0 } => sigma0 * sq,
            NoiseRule::Proportional { delta } => delta * sq * excess_demand.abs(),
            NoiseRule::Affine { sigma0, delta } => sq * (sigma0 + delta * excess_demand.abs()),
        }
    }
}

/// Price dynamics from a pair of closures `(S, ED, dt) -> value`.
pub struct CustomRule<F, G> {
    pub drift: F,
    pub diffusion: G,
}

impl<F, G> PriceDynamics for CustomRule<F, G>
where
    F: Fn(f64, f64, f64) -> f64,
    G: Fn(f64, f64, f64) -> f64,
{
    fn drift(&self, log_price: f64, excess_demand: f64, dt: f64) -> f64 {
        (self.drift)(log_price, excess_demand, dt)
    }

    fn diffusion(&self, log_price: f64, excess_demand: f64, dt: f64) -> f64 {
        (self.diffusion)(log_price, excess_demand, dt)
    }
}

/// Arithmetic mean of the individual excess demands.
pub fn aggregate_excess_demand(demands: &[f64]) -> Result<f64, MarketError> {
    if demands.is_empty() {
        return Err(MarketError::NoAgents);
    }
    Ok(demands.iter().sum::<f64>() / demands.len() as f64)
}

/// One step of the disequilibrium price model with the supplied standard
/// normal draw `eta`.
pub fn price_step<R: PriceDynamics + ?Sized>(
    state: &MarketState,
    excess_demand: f64,
    rule: &R,
    eta: f64,
) -> Result<MarketState, MarketError> {
    let s = state.log_price;
    let next = s
        + rule.drift(s, excess_demand, state.dt)
        + rule.diffusion(s, excess_demand, state.dt) * eta;
    let step_index = state.step_index + 1;
    if !next.is_finite() || next.abs() > BLOWUP_LIMIT {
        return Err(MarketError::NumericalBlowup {
            step: step_index,
            log_price: next,
        });
    }
    Ok(MarketState {
        log_price: next,
        step_index,
        dt: state.dt,
    })
}
