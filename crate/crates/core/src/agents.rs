//! Agent designs: fundamentalist and chartist excess demands and the
//! two-agent Franke-Westerhoff aggregation.

use serde::{Deserialize, Serialize};

/// A constant value or one value per simulation step.
///
/// Lookups past the end of a sequence hold its last entry.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Schedule {
    Constant(f64),
    PerStep(Vec<f64>),
}

impl Schedule {
    pub fn at(&self, step: usize) -> f64 {
        match self {
            Schedule::Constant(v) => *v,
            Schedule::PerStep(v) => v[step.min(v.len() - 1)],
        }
    }

    pub fn values(&self) -> Box<dyn Iterator<Item = f64> + '_> {
        match self {
            Schedule::Constant(v) => Box::new(std::iter::once(*v)),
            Schedule::PerStep(v) => Box::new(v.iter().copied()),
        }
    }

    /// Number of steps explicitly covered, `None` for a constant.
    pub fn covered_steps(&self) -> Option<usize> {
        match self {
            Schedule::Constant(_) => None,
            Schedule::PerStep(v) => Some(v.len()),
        }
    }
}

impl From<f64> for Schedule {
    fn from(v: f64) -> Self {
        Schedule::Constant(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FundamentalistParams {
    /// Reaction weight, `a > 0`.
    pub a: f64,
    /// Log fundamental value `P^F`.
    pub log_fundamental: Schedule,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChartistParams {
    /// Extrapolation weight, `b > 0`.
    pub b: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FwParams {
    /// Fundamentalist weight `a_k`.
    pub a: Schedule,
    /// Chartist weight `b_k`.
    pub b: Schedule,
    pub log_fundamental: Schedule,
    /// Standard deviation of the Gaussian term added to the aggregate.
    #[serde(default)]
    pub noise_std: f64,
}

/// `a * (P^F - P)`: buys below the fundamental value, sells above it.
pub fn fundamentalist_demand(a: f64, log_fundamental: f64, log_price: f64) -> f64 {
    a * (log_fundamental - log_price)
}

/// `b * (P_k - P_{k-1})`.
pub fn chartist_demand(b: f64, log_price_now: f64, log_price_prev: f64) -> f64 {
    b * (log_price_now - log_price_prev)
}

/// `(ed_C + ed_F) / 2 + noise_std * noise_draw`.
pub fn franke_westerhoff_ed(
    chartist: f64,
    fundamentalist: f64,
    noise_std: f64,
    noise_draw: f64,
) -> f64 {
    0.5 * (chartist + fundamentalist) + noise_std * noise_draw
}
