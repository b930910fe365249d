use super::{check_finite, StatsError};

/// Population mean and variance (`1/n`), two-pass with a compensation term
/// for the rounding error of the mean.
pub fn mean_var(sample: &[f64]) -> Result<(f64, f64), StatsError> {
    let n = sample.len();
    if n < 2 {
        return Err(StatsError::InsufficientData { needed: 2, got: n });
    }
    check_finite(sample)?;
    let nf = n as f64;
    let mean = sample.iter().sum::<f64>() / nf;
    let (sq, lin) = sample.iter().fold((0.0, 0.0), |(sq, lin), x| {
        let d = x - mean;
        (sq + d * d, lin + d)
    });
    let mean = mean + lin / nf;
    let var = ((sq - lin * lin / nf) / nf).max(0.0);
    Ok((mean, var))
}

fn central_moment(sample: &[f64], mean: f64, power: i32) -> f64 {
    sample.iter().map(|x| (x - mean).powi(power)).sum::<f64>() / sample.len() as f64
}

/// `m3 / sigma^3`.
pub fn skewness(sample: &[f64]) -> Result<f64, StatsError> {
    if sample.len() < 3 {
        return Err(StatsError::InsufficientData {
            needed: 3,
            got: sample.len(),
        });
    }
    let (mean, var) = mean_var(sample)?;
    if var <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    Ok(central_moment(sample, mean, 3) / var.powf(1.5))
}

/// `m4 / sigma^4 - 3`; zero for a Gaussian.
pub fn excess_kurtosis(sample: &[f64]) -> Result<f64, StatsError> {
    if sample.len() < 4 {
        return Err(StatsError::InsufficientData {
            needed: 4,
            got: sample.len(),
        });
    }
    let (mean, var) = mean_var(sample)?;
    if var <= 0.0 {
        return Err(StatsError::DegenerateSample);
    }
    Ok(central_moment(sample, mean, 4) / (var * var) - 3.0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_cases() {
        assert_eq!(mean_var(&[1.0, 1.0, 1.0]).unwrap(), (1.0, 0.0));
        assert_eq!(mean_var(&[-1.0, 1.0]).unwrap(), (0.0, 1.0));
        assert!(matches!(
            mean_var(&[1.0]),
            Err(StatsError::InsufficientData { .. })
        ));
        assert!(matches!(
            mean_var(&[1.0, f64::INFINITY]),
            Err(StatsError::NonFinite(1))
        ));
    }

    #[test]
    fn symmetric_skew_is_zero() {
        assert_eq!(skewness(&[-1.0, 0.0, 1.0]).unwrap(), 0.0);
        assert_eq!(skewness(&[-1.0, 1.0, -1.0, 1.0]).unwrap(), 0.0);
        assert_eq!(
            skewness(&[2.0, 2.0, 2.0]),
            Err(StatsError::DegenerateSample)
        );
    }

    #[test]
    fn two_point_kurtosis() {
        assert_eq!(excess_kurtosis(&[-1.0, 1.0, -1.0, 1.0]).unwrap(), -2.0);
        assert_eq!(
            excess_kurtosis(&[0.5; 10]),
            Err(StatsError::DegenerateSample)
        );
        assert!(excess_kurtosis(&[1.0, 2.0, 3.0]).is_err());
    }

    #[test]
    fn skewed_sample() {
        // m = 1, deviations (-1,-1,2): m2 = 2, m3 = 2 -> 2 / 2^1.5
        let s = skewness(&[0.0, 0.0, 3.0]).unwrap();
        assert!((s - 2.0 / 2f64.powf(1.5)).abs() < 1e-15);
    }
}
