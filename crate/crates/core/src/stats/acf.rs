use serde::{Deserialize, Serialize};

use super::{check_finite, StatsError};

/// Sample autocorrelation at lags `1..=max_lag`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AcfProfile {
    pub lags: Vec<usize>,
    pub values: Vec<f64>,
}

impl AcfProfile {
    pub fn points(&self) -> Vec<(f64, f64)> {
        self.lags
            .iter()
            .zip(&self.values)
            .map(|(&l, &v)| (l as f64, v))
            .collect()
    }

    pub fn get(&self, lag: usize) -> Option<f64> {
        self.lags
            .iter()
            .position(|&l| l == lag)
            .map(|i| self.values[i])
    }
}

/// Half-width `z / sqrt(n)` of the asymptotic null band for i.i.d. noise.
pub fn white_noise_band(n: usize, z: f64) -> f64 {
    z / (n as f64).sqrt()
}

struct Centered {
    dev: Vec<f64>,
    denom: f64,
}

fn center(series: &[f64]) -> Result<Centered, StatsError> {
    check_finite(series)?;
    let n = series.len() as f64;
    let mean = series.iter().sum::<f64>() / n;
    let dev: Vec<f64> = series.iter().map(|x| x - mean).collect();
    let denom = dev.iter().map(|d| d * d).sum::<f64>();
    if !(denom > 0.0) {
        return Err(StatsError::DegenerateSample);
    }
    Ok(Centered { dev, denom })
}

fn check_lag(lag: usize, len: usize) -> Result<(), StatsError> {
    if lag == 0 {
        return Err(StatsError::ZeroLag);
    }
    if lag + 2 > len {
        return Err(StatsError::LagTooLarge { lag, len });
    }
    Ok(())
}

fn lagged(c: &Centered, lag: usize) -> f64 {
    let num: f64 = c.dev[lag..].iter().zip(&c.dev).map(|(a, b)| a * b).sum();
    (num / c.denom).clamp(-1.0, 1.0)
}

/// Biased sample autocorrelation with the full-sample mean and denominator:
/// `sum_{t<n-l} (x[t+l]-m)(x[t]-m) / sum_t (x[t]-m)^2`.
pub fn autocorrelation(series: &[f64], lag: usize) -> Result<f64, StatsError> {
    check_lag(lag, series.len())?;
    let c = center(series)?;
    Ok(lagged(&c, lag))
}

pub fn acf_profile(series: &[f64], max_lag: usize) -> Result<AcfProfile, StatsError> {
    check_lag(max_lag.max(1), series.len())?;
    let c = center(series)?;
    let lags: Vec<usize> = (1..=max_lag).collect();
    let values = lags.iter().map(|&l| lagged(&c, l)).collect();
    Ok(AcfProfile { lags, values })
}
