//! Cross-type herding: agents in the minority relative to the aggregate
//! excess demand build up pressure and switch position at a threshold.

use rand::Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EnvironmentError {
    #[error("herding population must not be empty")]
    NoAgents,
    #[error("agent {index}: {reason}")]
    InvalidAgent { index: usize, reason: &'static str },
    #[error("invalid threshold band [{min}, {max}]")]
    InvalidBand { min: f64, max: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Position {
    Short,
    Long,
}

impl Position {
    pub fn sign(self) -> f64 {
        match self {
            Position::Short => -1.0,
            Position::Long => 1.0,
        }
    }

    pub fn flipped(self) -> Self {
        match self {
            Position::Short => Position::Long,
            Position::Long => Position::Short,
        }
    }

    pub fn as_i8(self) -> i8 {
        match self {
            Position::Short => -1,
            Position::Long => 1,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HerdingAgent {
    pub position: Position,
    /// Accumulated herding pressure, never negative.
    pub pressure: f64,
    /// Switching threshold, strictly positive.
    pub threshold: f64,
}

impl HerdingAgent {
    pub fn new(position: Position, threshold: f64) -> Self {
        Self {
            position,
            pressure: 0.0,
            threshold,
        }
    }

    /// Returns `true` if the agent switched position.
    #[inline]
    fn update(&mut self, excess_demand: f64, dt: f64) -> bool {
        if self.position.sign() * excess_demand < 0.0 {
            self.pressure += dt * excess_demand.abs();
            if self.pressure >= self.threshold {
                self.position = self.position.flipped();
                self.pressure = 0.0;
                return true;
            }
        }
        false
    }
}

/// Inclusive band from which initial thresholds are drawn uniformly.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ThresholdBand {
    pub min: f64,
    pub max: f64,
}

impl Default for ThresholdBand {
    fn default() -> Self {
        Self { min: 1.0, max: 2.0 }
    }
}

impl ThresholdBand {
    pub fn validate(&self) -> Result<(), EnvironmentError> {
        if self.min > 0.0 && self.max >= self.min && self.max.is_finite() {
            Ok(())
        } else {
            Err(EnvironmentError::InvalidBand {
                min: self.min,
                max: self.max,
            })
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HerdingPopulation {
    agents: Vec<HerdingAgent>,
}

impl HerdingPopulation {
    pub fn new(agents: Vec<HerdingAgent>) -> Result<Self, EnvironmentError> {
        if agents.is_empty() {
            return Err(EnvironmentError::NoAgents);
        }
        for (index, a) in agents.iter().enumerate() {
            if !(a.threshold > 0.0 && a.threshold.is_finite()) {
                return Err(EnvironmentError::InvalidAgent {
                    index,
                    reason: "threshold must be positive",
                });
            }
            if !(a.pressure >= 0.0 && a.pressure.is_finite()) {
                return Err(EnvironmentError::InvalidAgent {
                    index,
                    reason: "pressure must be non-negative",
                });
            }
        }
        Ok(Self { agents })
    }

    /// Draws `size` agents: for each agent in turn, a fair coin for the
    /// position and then a uniform threshold from `band`. Pressures start at 0.
    pub fn random<R: Rng + ?Sized>(
        size: usize,
        band: ThresholdBand,
        rng: &mut R,
    ) -> Result<Self, EnvironmentError> {
        band.validate()?;
        let agents = (0..size)
            .map(|_| {
                let position = if rng.random_bool(0.5) {
                    Position::Long
                } else {
                    Position::Short
                };
                let threshold = if band.max > band.min {
                    rng.random_range(band.min..=band.max)
                } else {
                    band.min
                };
                HerdingAgent::new(position, threshold)
            })
            .collect();
        Self::new(agents)
    }

    pub fn agents(&self) -> &[HerdingAgent] {
        &self.agents
    }

    pub fn len(&self) -> usize {
        self.agents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.agents.is_empty()
    }

    pub fn positions(&self) -> impl Iterator<Item = Position> + '_ {
        self.agents.iter().map(|a| a.position)
    }

    /// Mean position, with each agent's excess demand taken as its sign.
    pub fn excess_demand(&self) -> f64 {
        self.agents.iter().map(|a| a.position.sign()).sum::<f64>() / self.agents.len() as f64
    }

    /// Synchronous update against a fixed aggregate `excess_demand`.
    /// Returns the number of agents that switched.
    pub fn step(&mut self, excess_demand: f64, dt: f64) -> usize {
        self.agents
            .iter_mut()
            .map(|a| a.update(excess_demand, dt))
            .filter(|&switched| switched)
            .count()
    }
}

pub fn population_excess_demand(pop: &HerdingPopulation) -> f64 {
    pop.excess_demand()
}

/// Pure form of [`HerdingPopulation::step`].
pub fn herding_step(pop: &HerdingPopulation, excess_demand: f64, dt: f64) -> HerdingPopulation {
    let mut next = pop.clone();
    next.step(excess_demand, dt);
    next
}
