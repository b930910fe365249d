use serde::{Deserialize, Serialize};

use super::{check_finite, StatsError};

pub const MIN_FIT_POINTS: usize = 5;

/// Power-law exponent fitted by least squares in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TailFit {
    /// Negated log-log slope.
    pub exponent: f64,
    pub intercept: f64,
    /// RMS residual of the log-log regression.
    pub fit_residual: f64,
    pub points_used: usize,
}

/// Empirical complementary CDF `#{x > r} / n` at each distinct value `r`,
/// in increasing `r`.
pub fn tail_cdf_points(sample: &[f64]) -> Result<Vec<(f64, f64)>, StatsError> {
    if sample.is_empty() {
        return Err(StatsError::InsufficientData { needed: 1, got: 0 });
    }
    check_finite(sample)?;
    let mut sorted = sample.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    let nf = n as f64;
    let mut points = Vec::new();
    let mut i = 0;
    while i < n {
        let r = sorted[i];
        let mut j = i;
        while j < n && sorted[j] == r {
            j += 1;
        }
        points.push((r, (n - j) as f64 / nf));
        i = j;
    }
    Ok(points)
}

/// Fits `value ~ c * x^(-exponent)` over the points with positive abscissa
/// and value.
pub fn fit_power_decay(points: &[(f64, f64)]) -> Result<TailFit, StatsError> {
    let logs: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, y)| *x > 0.0 && *y > 0.0 && x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.ln(), y.ln()))
        .collect();
    let m = logs.len();
    if m < MIN_FIT_POINTS {
        return Err(StatsError::InsufficientPositivePoints {
            needed: MIN_FIT_POINTS,
            got: m,
        });
    }
    let mf = m as f64;
    let mx = logs.iter().map(|p| p.0).sum::<f64>() / mf;
    let my = logs.iter().map(|p| p.1).sum::<f64>() / mf;
    let (sxx, sxy) = logs.iter().fold((0.0, 0.0), |(sxx, sxy), (x, y)| {
        let dx = x - mx;
        (sxx + dx * dx, sxy + dx * (y - my))
    });
    if !(sxx > 0.0) {
        return Err(StatsError::DegenerateSample);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let sse: f64 = logs
        .iter()
        .map(|(x, y)| {
            let e = y - (intercept + slope * x);
            e * e
        })
        .sum();
    let exponent = -slope;
    if !(exponent.is_finite() && exponent > 0.0) {
        return Err(StatsError::NonDecaying { slope });
    }
    Ok(TailFit {
        exponent,
        intercept,
        fit_residual: (sse / mf).sqrt(),
        points_used: m,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ccdf_counts() {
        let pts = tail_cdf_points(&[4.0, 2.0, 1.0, 3.0]).unwrap();
        assert_eq!(pts, vec![(1.0, 0.75), (2.0, 0.5), (3.0, 0.25), (4.0, 0.0)]);
        let pts = tail_cdf_points(&[1.0, 1.0, 2.0]).unwrap();
        assert_eq!(pts, vec![(1.0, 1.0 / 3.0), (2.0, 0.0)]);
        assert!(tail_cdf_points(&[]).is_err());
    }

    #[test]
    fn exact_power_law() {
        let pts: Vec<(f64, f64)> = (1..=50)
            .map(|l| (l as f64, (l as f64).powf(-0.5)))
            .collect();
        let fit = fit_power_decay(&pts).unwrap();
        assert!((fit.exponent - 0.5).abs() < 1e-10);
        assert!(fit.fit_residual < 1e-10);
        assert_eq!(fit.points_used, 50);
    }

    #[test]
    fn slope_is_scale_free() {
        for c in [1e-3, 0.7, 42.0] {
            let pts: Vec<(f64, f64)> = (1..=30)
                .map(|l| (l as f64, c * (l as f64).powf(-1.2)))
                .collect();
            let fit = fit_power_decay(&pts).unwrap();
            assert!((fit.exponent - 1.2).abs() < 1e-10);
        }
    }

    #[test]
    fn needs_five_positive_points() {
        let pts = [
            (1.0, 1.0),
            (2.0, 0.5),
            (3.0, -0.1),
            (4.0, 0.2),
            (5.0, 0.0),
            (6.0, 0.1),
        ];
        assert_eq!(
            fit_power_decay(&pts),
            Err(StatsError::InsufficientPositivePoints { needed: 5, got: 4 })
        );
    }

    #[test]
    fn growth_is_rejected() {
        let pts: Vec<(f64, f64)> = (1..=10).map(|l| (l as f64, l as f64)).collect();
        assert!(matches!(
            fit_power_decay(&pts),
            Err(StatsError::NonDecaying { .. })
        ));
    }
}
