use super::{check_finite, StatsError};

/// Upper 5% of the positive sample.
pub const DEFAULT_TAIL_FRACTION: f64 = 0.05;

/// Number of order statistics `k = floor(fraction * positives)`.
///
/// A relative nudge of 1e-12 keeps products such as `0.05 * 60` from
/// flooring to the integer below through representation error.
pub fn hill_tail_size(positives: usize, tail_fraction: f64) -> usize {
    (tail_fraction * positives as f64 * (1.0 + 1e-12)).floor() as usize
}

/// Hill tail-exponent estimate from the largest `k` positive values:
/// `H = ( (1/k) sum_{i<=k} ln(x_i / x_{k+1}) )^-1` with `x_1 >= x_2 >= ...`.
///
/// Non-positive entries are discarded before `k` is computed.
pub fn hill_estimator(sample: &[f64], tail_fraction: f64) -> Result<f64, StatsError> {
    if !(tail_fraction > 0.0 && tail_fraction < 1.0) {
        return Err(StatsError::InvalidTailFraction(tail_fraction));
    }
    check_finite(sample)?;
    let mut positives: Vec<f64> = sample.iter().copied().filter(|x| *x > 0.0).collect();
    let n = positives.len();
    let k = hill_tail_size(n, tail_fraction);
    if k < 1 || k + 1 > n {
        return Err(StatsError::InsufficientTail { k, positives: n });
    }
    // Only the top k+1 order statistics matter.
    positives.select_nth_unstable_by(k, |a, b| b.total_cmp(a));
    let threshold = positives[k];
    let sum: f64 = positives[..k].iter().map(|x| (x / threshold).ln()).sum();
    if !(sum > 0.0) {
        return Err(StatsError::DegenerateTail);
    }
    Ok(k as f64 / sum)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::E;

    #[test]
    fn exact_log_grid() {
        let mut x = vec![E.powi(3), E.powi(2), E, 1.0];
        x.extend((0..56).map(|i| 0.01 + i as f64 / 60.0));
        x.push(-0.3);
        x.push(0.0);
        let h = hill_estimator(&x, 0.05).unwrap();
        assert!((h - 0.5).abs() < 1e-14, "{h}");
    }

    #[test]
    fn tail_size_floors() {
        assert_eq!(hill_tail_size(60, 0.05), 3);
        assert_eq!(hill_tail_size(39, 0.05), 1);
        assert_eq!(hill_tail_size(19, 0.05), 0);
        assert_eq!(hill_tail_size(100_000, 0.05), 5000);
        for n in 1..5000 {
            assert_eq!(hill_tail_size(n, 0.05), n / 20, "n = {n}");
        }
    }

    #[test]
    fn errors() {
        let small: Vec<f64> = (1..=19).map(f64::from).collect();
        assert!(matches!(
            hill_estimator(&small, 0.05),
            Err(StatsError::InsufficientTail { k: 0, .. })
        ));
        assert_eq!(
            hill_estimator(&[2.0; 40], 0.05),
            Err(StatsError::DegenerateTail)
        );
        assert!(matches!(
            hill_estimator(&[1.0, 2.0], 1.5),
            Err(StatsError::InvalidTailFraction(_))
        ));
        // only the positive entries count toward n
        let mut x: Vec<f64> = (1..=20).map(f64::from).collect();
        x.extend([-1.0; 100]);
        assert!(hill_estimator(&x, 0.05).is_ok());
        x.truncate(19);
        assert!(hill_estimator(&x, 0.05).is_err());
    }
}
