//! Random agreement check between the analytic water-filling value and the
//! enumeration oracle.

use msrom_core::bounds::{sup_oracle, water_filling};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OracleSweep {
    pub tuples: usize,
    pub max_relative_deviation: f64,
}

/// `(delta, sigma, gamma, tau_n)` with `sigma` sorted nonincreasing.
pub fn random_tuple<R: Rng>(n: usize, rng: &mut R) -> (Vec<f64>, Vec<f64>, f64, f64) {
    let delta: Vec<f64> = (0..n).map(|_| 2.0 * rng.random::<f64>()).collect();
    let mut sigma: Vec<f64> = (0..n).map(|_| rng.random::<f64>()).collect();
    sigma.sort_by(|a, b| b.total_cmp(a));
    (delta, sigma, 1.2 * rng.random::<f64>(), rng.random::<f64>())
}

pub fn oracle_sweep(n: usize, seed: u64, tuples: usize) -> msrom_core::Result<OracleSweep> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..tuples {
        let (delta, sigma, gamma, tau_n) = random_tuple(n, &mut rng);
        let analytic = water_filling(&delta, &sigma, gamma, tau_n)?.sup_value;
        let brute = sup_oracle(&delta, &sigma, gamma, tau_n)?;
        let scale = analytic.abs().max(brute.abs()).max(f64::MIN_POSITIVE);
        worst = worst.max((analytic - brute).abs() / scale);
    }
    Ok(OracleSweep {
        tuples,
        max_relative_deviation: worst,
    })
}
