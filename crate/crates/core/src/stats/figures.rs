use serde::{Deserialize, Serialize};

use super::{mean_var, normal, StatsError};

pub const DEFAULT_BIN_COUNT: usize = 200;

/// Equal-width histogram over `[min, max]` with a fitted Gaussian density at
/// each bin center.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct HistogramData {
    pub min: f64,
    pub max: f64,
    pub bin_width: f64,
    pub centers: Vec<f64>,
    pub counts: Vec<u64>,
    /// `Normal(mean, variance)` density evaluated at `centers`.
    pub gaussian_density: Vec<f64>,
    pub mean: f64,
    pub variance: f64,
    pub sample_size: usize,
}

impl HistogramData {
    /// Empirical density of each bin: `count / (n * width)`.
    pub fn empirical_density(&self) -> Vec<f64> {
        let scale = self.sample_size as f64 * self.bin_width;
        self.counts.iter().map(|&c| c as f64 / scale).collect()
    }
}

/// Bins are half-open `[lo, hi)` except the last, which is closed.
pub fn histogram_data(sample: &[f64], bin_count: usize) -> Result<HistogramData, StatsError> {
    if bin_count == 0 {
        return Err(StatsError::ZeroBins);
    }
    let (mean, variance) = mean_var(sample)?;
    let min = sample.iter().copied().fold(f64::INFINITY, f64::min);
    let max = sample.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if !(max > min) {
        return Err(StatsError::DegenerateSample);
    }
    let width = (max - min) / bin_count as f64;
    let mut counts = vec![0u64; bin_count];
    for &x in sample {
        let idx = ((x - min) / width).floor() as usize;
        counts[idx.min(bin_count - 1)] += 1;
    }
    let centers: Vec<f64> = (0..bin_count)
        .map(|i| min + (i as f64 + 0.5) * width)
        .collect();
    let gaussian_density = centers
        .iter()
        .map(|&c| normal::pdf_with(c, mean, variance))
        .collect();
    Ok(HistogramData {
        min,
        max,
        bin_width: width,
        centers,
        counts,
        gaussian_density,
        mean,
        variance,
        sample_size: sample.len(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QqPoint {
    pub theoretical: f64,
    pub empirical: f64,
}

/// Sorted sample against `mean + sigma * Phi^-1((i - 0.5) / n)`.
pub fn qq_data(sample: &[f64]) -> Result<Vec<QqPoint>, StatsError> {
    let (mean, variance) = mean_var(sample)?;
    if !(variance > 0.0) {
        return Err(StatsError::DegenerateSample);
    }
    let sd = variance.sqrt();
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    Ok(sorted
        .into_iter()
        .enumerate()
        .map(|(i, empirical)| QqPoint {
            theoretical: mean + sd * normal::quantile((i as f64 + 0.5) / n),
            empirical,
        })
        .collect())
}
