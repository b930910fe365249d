use std::path::Path;

use serde::{Deserialize, Serialize};

use super::SimError;
use crate::agents::{ChartistParams, FundamentalistParams, FwParams, Schedule};
use crate::environment::ThresholdBand;
use crate::market::{DriftRule, NoiseRule, PriceRule};

/// Full description of one simulation run, read from JSON.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub model: ModelConfig,
    pub steps: usize,
    pub dt: f64,
    pub seed: u64,
    pub price_rule: PriceRule,
    #[serde(default)]
    pub initial_log_price: f64,
    /// Steps discarded before returns are formed; 10% of `steps` when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub burn_in: Option<usize>,
    /// Keep every agent's position after each step.
    #[serde(default)]
    pub record_positions: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ModelConfig {
    /// One chartist and one fundamentalist, `ED = (ed_C + ed_F)/2 + noise`.
    FwTwoAgent(FwParams),
    CrossHerding(CrossHerdingParams),
    /// Arbitrary mix of agents; `ED` is the mean over every individual demand.
    Custom(CustomParams),
}

/// Herding traders (`ed_i = sigma_i`) anchored by a fundamentalist block:
/// `ED = (1 - w) * mean(sigma) + w * a * (P^F - S)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CrossHerdingParams {
    pub agents: usize,
    #[serde(default)]
    pub threshold_band: ThresholdBand,
    pub fundamentalist: FundamentalistParams,
    /// Weight `w` of the fundamentalist block, in `[0, 1)`.
    pub fundamental_weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CustomParams {
    #[serde(default)]
    pub fundamentalists: Vec<FundamentalistParams>,
    #[serde(default)]
    pub chartists: Vec<ChartistParams>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub herding: Option<HerdingGroup>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HerdingGroup {
    pub agents: usize,
    #[serde(default)]
    pub threshold_band: ThresholdBand,
}

impl RunConfig {
    /// Development-tuned Cross herding setup that produces fat tails and
    /// volatility clustering. These values are not calibrated to any market.
    pub fn cross_herding_default(seed: u64) -> Self {
        RunConfig {
            model: ModelConfig::CrossHerding(CrossHerdingParams {
                agents: 1000,
                threshold_band: ThresholdBand::default(),
                fundamentalist: FundamentalistParams {
                    a: 2.0,
                    log_fundamental: Schedule::Constant(0.0),
                },
                fundamental_weight: 0.5,
            }),
            steps: 100_000,
            dt: 0.0025,
            seed,
            price_rule: PriceRule {
                drift: DriftRule::Linear { gamma: 2.0 },
                noise: NoiseRule::Affine {
                    sigma0: 0.1,
                    delta: 0.6,
                },
            },
            initial_log_price: 0.0,
            burn_in: None,
            record_positions: false,
        }
    }

    pub fn from_json_str(s: &str) -> Result<Self, SimError> {
        let cfg: RunConfig = serde_json::from_str(s).map_err(|e| SimError::Config {
            path: "<document>".into(),
            message: e.to_string(),
        })?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_json_file(path: impl AsRef<Path>) -> Result<Self, SimError> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| SimError::Config {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_json_str(&text)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn burn_in_steps(&self) -> usize {
        self.burn_in.unwrap_or(self.steps / 10)
    }

    pub fn validate(&self) -> Result<(), SimError> {
        if self.steps < 1 {
            return Err(cfg_err("steps", "must be at least 1"));
        }
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(cfg_err("dt", "must be finite and positive"));
        }
        if !self.initial_log_price.is_finite() {
            return Err(cfg_err("initial_log_price", "must be finite"));
        }
        if self.burn_in_steps() >= self.steps {
            return Err(cfg_err("burn_in", "must be smaller than steps"));
        }
        self.price_rule
            .validate()
            .map_err(|e| cfg_err("price_rule", e.to_string()))?;
        match &self.model {
            ModelConfig::FwTwoAgent(p) => {
                check_schedule("model.a", &p.a, self.steps, true)?;
                check_schedule("model.b", &p.b, self.steps, true)?;
                check_schedule(
                    "model.log_fundamental",
                    &p.log_fundamental,
                    self.steps,
                    false,
                )?;
                if !(p.noise_std >= 0.0 && p.noise_std.is_finite()) {
                    return Err(cfg_err("model.noise_std", "must be non-negative"));
                }
            }
            ModelConfig::CrossHerding(p) => {
                if p.agents < 1 {
                    return Err(cfg_err("model.agents", "must be at least 1"));
                }
                p.threshold_band
                    .validate()
                    .map_err(|e| cfg_err("model.threshold_band", e.to_string()))?;
                check_fundamentalist("model.fundamentalist", &p.fundamentalist, self.steps)?;
                if !(0.0..1.0).contains(&p.fundamental_weight) {
                    return Err(cfg_err("model.fundamental_weight", "must lie in [0, 1)"));
                }
            }
            ModelConfig::Custom(p) => {
                let herders = p.herding.map_or(0, |h| h.agents);
                if p.fundamentalists.len() + p.chartists.len() + herders == 0 {
                    return Err(cfg_err("model", "needs at least one agent"));
                }
                for (i, f) in p.fundamentalists.iter().enumerate() {
                    check_fundamentalist(&format!("model.fundamentalists[{i}]"), f, self.steps)?;
                }
                for (i, c) in p.chartists.iter().enumerate() {
                    if !(c.b > 0.0 && c.b.is_finite()) {
                        return Err(cfg_err(
                            format!("model.chartists[{i}].b"),
                            "must be positive",
                        ));
                    }
                }
                if let Some(h) = p.herding {
                    h.threshold_band
                        .validate()
                        .map_err(|e| cfg_err("model.herding.threshold_band", e.to_string()))?;
                }
            }
        }
        Ok(())
    }
}

fn cfg_err(path: impl Into<String>, message: impl ToString) -> SimError {
    SimError::Config {
        path: path.into(),
        message: message.to_string(),
    }
}

fn check_fundamentalist(
    path: &str,
    f: &FundamentalistParams,
    steps: usize,
) -> Result<(), SimError> {
    if !(f.a > 0.0 && f.a.is_finite()) {
        return Err(cfg_err(format!("{path}.a"), "must be positive"));
    }
    check_schedule(
        &format!("{path}.log_fundamental"),
        &f.log_fundamental,
        steps,
        false,
    )
}

fn check_schedule(path: &str, s: &Schedule, steps: usize, positive: bool) -> Result<(), SimError> {
    if let Some(len) = s.covered_steps() {
        if len < steps {
            return Err(cfg_err(
                path,
                format!("per-step schedule has {len} entries, need {steps}"),
            ));
        }
    }
    for v in s.values() {
        if !v.is_finite() || (positive && !(v > 0.0)) {
            let what = if positive {
                "finite and positive"
            } else {
                "finite"
            };
            return Err(cfg_err(path, format!("entries must be {what}")));
        }
    }
    Ok(())
}
