//! Attribute-permutation null model: shuffle observed values across users
//! while holding the network structure fixed, re-measure the paradox, and
//! standardize the observed magnitude against that baseline.

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::Error;
use crate::paradox::ParadoxStats;
use crate::Result;

/// Replicate count and seed for a permutation run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NullConfig {
    pub replicates: usize,
    pub seed: u64,
}

impl Default for NullConfig {
    fn default() -> Self {
        NullConfig {
            replicates: 1000,
            seed: 0,
        }
    }
}

/// Observed magnitude set against the permutation baseline.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SurpriseResult {
    /// Eligible-user count the magnitudes are taken over.
    pub n: usize,
    pub observed: f64,
    /// Mean magnitude across permutation replicates.
    pub expected: f64,
    /// Standardized deviation of observed from expected; NaN when the
    /// expected magnitude is degenerate (0 or 1).
    pub surprise: f64,
    /// Add-one permutation p-value for the one-sided excess
    /// `magnitude ≥ observed`.
    pub empirical_p: f64,
}

/// Deterministic per-replicate seed; replicates must not share RNG streams
/// even when they run concurrently.
pub(crate) fn child_seed(seed: u64, replicate: u64) -> u64 {
    // splitmix64 finalizer over the (seed, replicate) pair
    let mut z = seed ^ replicate.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Uniform random permutation of `values`, deterministic per seed.
pub fn permute_values(values: &[f64], seed: u64) -> Vec<f64> {
    let mut out = values.to_vec();
    out.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    out
}

/// Evaluate a function once per replicate against a shuffled value
/// assignment, returning results in replicate order.
///
/// Only defined values move; undefined slots stay undefined, so user
/// eligibility — and therefore the total each magnitude is a fraction
/// of — is identical in every replicate. Replicates are evaluated
/// concurrently and collected by index, so the output is identical for
/// any worker count.
pub fn map_replicates<T, F>(values: &[Option<f64>], per_replicate: F, cfg: &NullConfig) -> Vec<T>
where
    T: Send,
    F: Fn(&[Option<f64>]) -> T + Sync,
{
    assert!(cfg.replicates >= 1, "null model needs at least one replicate");
    let defined_slots: Vec<usize> = values
        .iter()
        .enumerate()
        .filter_map(|(i, v)| v.map(|_| i))
        .collect();
    let pool: Vec<f64> = defined_slots.iter().map(|&i| values[i].unwrap()).collect();
    (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(child_seed(cfg.seed, r));
            let mut shuffled = pool.clone();
            shuffled.shuffle(&mut rng);
            let mut assigned = values.to_vec();
            for (&slot, &value) in defined_slots.iter().zip(&shuffled) {
                assigned[slot] = Some(value);
            }
            per_replicate(&assigned)
        })
        .collect()
}

/// Per-replicate magnitudes of an analysis under shuffled value
/// assignments.
pub fn null_distribution<F>(values: &[Option<f64>], magnitude_of: F, cfg: &NullConfig) -> Vec<f64>
where
    F: Fn(&[Option<f64>]) -> f64 + Sync,
{
    map_replicates(values, magnitude_of, cfg)
}

/// Mean magnitude over permutation replicates.
pub fn expected_magnitude<F>(values: &[Option<f64>], magnitude_of: F, cfg: &NullConfig) -> f64
where
    F: Fn(&[Option<f64>]) -> f64 + Sync,
{
    mean(&null_distribution(values, magnitude_of, cfg))
}

fn mean(values: &[f64]) -> f64 {
    values.iter().sum::<f64>() / values.len() as f64
}

/// Standardized deviation of an observed magnitude from its expectation:
/// `n(observed − expected) / sqrt(n · expected · (1 − expected))`.
pub fn surprise(n: usize, observed: f64, expected: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "surprise needs at least one eligible user".into(),
        ));
    }
    if !(expected > 0.0 && expected < 1.0) {
        return Err(Error::DegenerateExpected(expected));
    }
    let n = n as f64;
    Ok(n * (observed - expected) / (n * expected * (1.0 - expected)).sqrt())
}

/// Run the full null-model assessment for one observed analysis result.
pub fn assess<F>(
    values: &[Option<f64>],
    magnitude_of: F,
    observed: &ParadoxStats,
    cfg: &NullConfig,
) -> SurpriseResult
where
    F: Fn(&[Option<f64>]) -> f64 + Sync,
{
    let distribution = null_distribution(values, magnitude_of, cfg);
    let expected = mean(&distribution);
    let at_least = distribution
        .iter()
        .filter(|&&m| m >= observed.magnitude)
        .count();
    let empirical_p = (1 + at_least) as f64 / (distribution.len() + 1) as f64;
    SurpriseResult {
        n: observed.total,
        observed: observed.magnitude,
        expected,
        surprise: surprise(observed.total, observed.magnitude, expected).unwrap_or(f64::NAN),
        empirical_p,
    }
}
