//! Shared inputs for the benchmarks.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

/// `n` seeded standard normal draws.
pub fn gaussian_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n).map(|_| rng.sample(StandardNormal)).collect()
}

/// `n` seeded Student-t(3)-like draws: Gaussian over the root of a scaled chi-square.
pub fn heavy_tailed_sample(n: usize, seed: u64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..n)
        .map(|_| {
            let z: f64 = rng.sample(StandardNormal);
            let chi: f64 = (0..3)
                .map(|_| rng.sample::<f64, _>(StandardNormal).powi(2))
                .sum();
            z / (chi / 3.0).sqrt()
        })
        .collect()
}
