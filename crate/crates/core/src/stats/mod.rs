//! Stylized-fact estimators: moments, autocorrelation, tail exponents and
//! the arrays behind histogram, quantile-quantile and ACF figures.
//!
//! All moments use population (`1/n`) normalization.

mod acf;
mod figures;
mod hill;
mod moments;
pub mod normal;
mod report;
mod tail;

pub use acf::{acf_profile, autocorrelation, white_noise_band, AcfProfile};
pub use figures::{histogram_data, qq_data, HistogramData, QqPoint, DEFAULT_BIN_COUNT};
pub use hill::{hill_estimator, hill_tail_size, DEFAULT_TAIL_FRACTION};
pub use moments::{excess_kurtosis, mean_var, skewness};
pub use report::{full_report, hill_label, row_labels, ReportError, StatsReport, DEFAULT_LAGS};
pub use tail::{fit_power_decay, tail_cdf_points, TailFit, MIN_FIT_POINTS};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("insufficient data: need at least {needed} values, got {got}")]
    InsufficientData { needed: usize, got: usize },
    #[error("degenerate sample: zero variance or zero range")]
    DegenerateSample,
    #[error("lag {lag} too large for series of length {len}")]
    LagTooLarge { lag: usize, len: usize },
    #[error("lag must be at least 1")]
    ZeroLag,
    #[error("insufficient tail: k = {k} from {positives} positive values")]
    InsufficientTail { k: usize, positives: usize },
    #[error("degenerate tail: all top order statistics equal the threshold")]
    DegenerateTail,
    #[error("insufficient positive points for power fit: need {needed}, got {got}")]
    InsufficientPositivePoints { needed: usize, got: usize },
    #[error("fitted curve is not decaying (slope {slope})")]
    NonDecaying { slope: f64 },
    #[error("bin count must be at least 1")]
    ZeroBins,
    #[error("tail fraction must lie in (0, 1), got {0}")]
    InvalidTailFraction(f64),
    #[error("sample contains non-finite value at index {0}")]
    NonFinite(usize),
}

pub(crate) fn check_finite(sample: &[f64]) -> Result<(), StatsError> {
    match sample.iter().position(|x| !x.is_finite()) {
        Some(i) => Err(StatsError::NonFinite(i)),
        None => Ok(()),
    }
}
