//! Price and return series shared by ingestion, simulation and statistics.

use chrono::NaiveDate;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SeriesError {
    #[error("insufficient data: need at least {needed} entries, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("invalid price {price} at index {index}: prices must be finite and positive")]
    InvalidPrice { index: usize, price: f64 },
    #[error("dates must be strictly increasing (index {index})")]
    UnorderedDates { index: usize },
    #[error("length mismatch: {dates} dates vs {prices} prices")]
    LengthMismatch { dates: usize, prices: usize },
    #[error("invalid return kind: expected {expected:?}, got {got:?}")]
    InvalidKind {
        expected: ReturnKind,
        got: ReturnKind,
    },
    #[error("absolute return series contains negative value at index {index}")]
    NegativeAbsolute { index: usize },
}

/// Dated daily prices of a single asset. Every price is finite and strictly
/// positive; dates are strictly increasing.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PriceSeries {
    dates: Vec<NaiveDate>,
    prices: Vec<f64>,
    label: String,
}

impl PriceSeries {
    pub fn new(
        dates: Vec<NaiveDate>,
        prices: Vec<f64>,
        label: impl Into<String>,
    ) -> Result<Self, SeriesError> {
        if dates.len() != prices.len() {
            return Err(SeriesError::LengthMismatch {
                dates: dates.len(),
                prices: prices.len(),
            });
        }
        validate_prices(&prices)?;
        if let Some(index) = dates.windows(2).position(|w| w[0] >= w[1]) {
            return Err(SeriesError::UnorderedDates { index: index + 1 });
        }
        Ok(Self {
            dates,
            prices,
            label: label.into(),
        })
    }

    /// Builds a series without a calendar. Dates are synthesized as
    /// consecutive days from 1970-01-01 so that index lags equal day lags.
    pub fn from_prices(prices: Vec<f64>, label: impl Into<String>) -> Result<Self, SeriesError> {
        let start = NaiveDate::from_ymd_opt(1970, 1, 1).expect("valid epoch");
        let dates = start.iter_days().take(prices.len()).collect();
        Self::new(dates, prices, label)
    }

    pub fn dates(&self) -> &[NaiveDate] {
        &self.dates
    }

    pub fn prices(&self) -> &[f64] {
        &self.prices
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn len(&self) -> usize {
        self.prices.len()
    }

    pub fn is_empty(&self) -> bool {
        self.prices.is_empty()
    }
}

fn validate_prices(prices: &[f64]) -> Result<(), SeriesError> {
    match prices.iter().position(|p| !(p.is_finite() && *p > 0.0)) {
        Some(index) => Err(SeriesError::InvalidPrice {
            index,
            price: prices[index],
        }),
        None => Ok(()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReturnKind {
    Raw,
    Absolute,
}

impl ReturnKind {
    pub fn as_str(self) -> &'static str {
        match self {
            ReturnKind::Raw => "raw",
            ReturnKind::Absolute => "absolute",
        }
    }
}

/// Undated sequence of logarithmic returns.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReturnSeries {
    values: Vec<f64>,
    kind: ReturnKind,
    origin: String,
}

impl ReturnSeries {
    pub fn new(
        values: Vec<f64>,
        kind: ReturnKind,
        origin: impl Into<String>,
    ) -> Result<Self, SeriesError> {
        if kind == ReturnKind::Absolute {
            if let Some(index) = values.iter().position(|v| !(*v >= 0.0)) {
                return Err(SeriesError::NegativeAbsolute { index });
            }
        }
        Ok(Self {
            values,
            kind,
            origin: origin.into(),
        })
    }

    pub fn raw(values: Vec<f64>, origin: impl Into<String>) -> Self {
        Self {
            values,
            kind: ReturnKind::Raw,
            origin: origin.into(),
        }
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> ReturnKind {
        self.kind
    }

    pub fn origin(&self) -> &str {
        &self.origin
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// `r[k] = ln(p[k+1]) - ln(p[k])`.
pub fn log_returns(prices: &PriceSeries) -> Result<ReturnSeries, SeriesError> {
    let values = log_returns_of(prices.prices())?;
    Ok(ReturnSeries::raw(values, prices.label()))
}

/// Log returns of a bare positive price slice.
///
/// Evaluated as `ln_1p((p1 - p0) / p0)`, which stays accurate when
/// consecutive prices are close.
pub fn log_returns_of(prices: &[f64]) -> Result<Vec<f64>, SeriesError> {
    if prices.len() < 2 {
        return Err(SeriesError::InsufficientData {
            needed: 2,
            got: prices.len(),
        });
    }
    validate_prices(prices)?;
    Ok(prices
        .windows(2)
        .map(|w| ((w[1] - w[0]) / w[0]).ln_1p())
        .collect())
}

pub fn absolute_returns(returns: &ReturnSeries) -> Result<ReturnSeries, SeriesError> {
    if returns.kind != ReturnKind::Raw {
        return Err(SeriesError::InvalidKind {
            expected: ReturnKind::Raw,
            got: returns.kind,
        });
    }
    Ok(ReturnSeries {
        values: returns.values.iter().map(|v| v.abs()).collect(),
        kind: ReturnKind::Absolute,
        origin: returns.origin.clone(),
    })
}
