use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{autocorrelation, excess_kurtosis, hill_estimator, skewness, StatsError};
use crate::timeseries::{ReturnKind, ReturnSeries};

pub const DEFAULT_LAGS: [usize; 4] = [10, 20, 50, 100];

#[derive(Debug, Error, Clone, PartialEq)]
#[error("{statistic}: {source}")]
pub struct ReportError {
    pub statistic: String,
    #[source]
    pub source: StatsError,
}

/// One column of a stylized-facts table.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StatsReport {
    pub skew: f64,
    pub excess_kurtosis: f64,
    pub hill: f64,
    pub tail_fraction: f64,
    pub acf_at_lags: BTreeMap<usize, f64>,
    pub sample_size: usize,
    pub kind: ReturnKind,
}

impl StatsReport {
    /// Table rows in display order: skew, kurtosis, Hill, then one row per lag.
    pub fn rows(&self) -> Vec<(String, f64)> {
        let mut rows = vec![
            ("Skew".to_string(), self.skew),
            ("Excess Kurtosis".to_string(), self.excess_kurtosis),
            (hill_label(self.tail_fraction), self.hill),
        ];
        rows.extend(
            self.acf_at_lags
                .iter()
                .map(|(lag, v)| (format!("AutoCorr {lag}"), *v)),
        );
        rows
    }
}

/// Row label for the Hill estimate, e.g. `Hill 5%`.
pub fn hill_label(tail_fraction: f64) -> String {
    format!("Hill {}%", (tail_fraction * 1e6).round() / 1e4)
}

/// Row labels produced by [`StatsReport::rows`] for the given settings.
pub fn row_labels(lags: &[usize], tail_fraction: f64) -> Vec<String> {
    let mut labels = vec![
        "Skew".to_string(),
        "Excess Kurtosis".to_string(),
        hill_label(tail_fraction),
    ];
    let mut sorted: Vec<usize> = lags.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    labels.extend(sorted.iter().map(|l| format!("AutoCorr {l}")));
    labels
}

fn labeled<T>(statistic: impl Into<String>, r: Result<T, StatsError>) -> Result<T, ReportError> {
    r.map_err(|source| ReportError {
        statistic: statistic.into(),
        source,
    })
}

pub fn full_report(
    returns: &ReturnSeries,
    lags: &[usize],
    tail_fraction: f64,
) -> Result<StatsReport, ReportError> {
    let x = returns.values();
    let skew = labeled("Skew", skewness(x))?;
    let excess_kurtosis = labeled("Excess Kurtosis", excess_kurtosis(x))?;
    let hill = labeled(hill_label(tail_fraction), hill_estimator(x, tail_fraction))?;
    let mut acf_at_lags = BTreeMap::new();
    for &lag in lags {
        let c = labeled(format!("AutoCorr {lag}"), autocorrelation(x, lag))?;
        acf_at_lags.insert(lag, c);
    }
    Ok(StatsReport {
        skew,
        excess_kurtosis,
        hill,
        tail_fraction,
        acf_at_lags,
        sample_size: x.len(),
        kind: returns.kind(),
    })
}
